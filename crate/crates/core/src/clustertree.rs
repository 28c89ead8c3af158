//! Leveled tree of p-adic residue classes of the branch points, and the
//! multiplicities of `x − a_r`, `y` and the vertical divisors `V_k` along its
//! nodes (odd residue characteristic).
//!
//! Level `n` holds the classes of ℤ_(p)/p^n containing at least two roots;
//! level 0 is the single class of all roots. Nodes are treated directly as
//! components of the special fiber.
//!
//! This gives a second route to `ν(ℓ_ijk)` that shares no code with
//! [`crate::symroots`]: the combination
//! `(2g−1)(W_i−W_j, V_k) + (V_i−V_j, W_k)` equals `2g(g−1) ν(ℓ_ijk)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{int, Order, Prime, ProjRat, Rat};
use crate::symroots::{RootConfig, Triple};

/// Violations of Kausz normal form: roots integral, pairwise valuations
/// even, at least three residue classes mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KauszReport {
    pub prime: u64,
    pub characteristic_two: bool,
    pub infinite_roots: Vec<usize>,
    pub non_integral: Vec<usize>,
    /// `(r, s, ν(a_r − a_s))` for each odd pairwise valuation.
    pub odd_valuations: Vec<(usize, usize, i64)>,
    pub residue_classes: usize,
}

impl KauszReport {
    pub fn passed(&self) -> bool {
        !self.characteristic_two
            && self.infinite_roots.is_empty()
            && self.non_integral.is_empty()
            && self.odd_valuations.is_empty()
            && self.residue_classes >= 3
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.characteristic_two {
            v.push("residue characteristic 2".to_string());
        }
        for r in &self.infinite_roots {
            v.push(format!("root {r} is at infinity"));
        }
        for r in &self.non_integral {
            v.push(format!("root {r} is not {}-integral", self.prime));
        }
        for (r, s, n) in &self.odd_valuations {
            v.push(format!("odd valuation {n} between roots {r} and {s}"));
        }
        if self.residue_classes < 3 {
            v.push(format!(
                "only {} residue classes mod {}",
                self.residue_classes, self.prime
            ));
        }
        v
    }

    pub fn summary(&self) -> String {
        let v = self.violations();
        if v.is_empty() {
            "pass".into()
        } else {
            v.join("; ")
        }
    }
}

pub fn check_kausz_form(cfg: &RootConfig, p: Prime) -> KauszReport {
    let mut report = KauszReport {
        prime: p.get(),
        characteristic_two: !p.is_odd(),
        infinite_roots: Vec::new(),
        non_integral: Vec::new(),
        odd_valuations: Vec::new(),
        residue_classes: 0,
    };
    let mut finite: Vec<(usize, &Rat)> = Vec::new();
    for (r, a) in cfg.roots().iter().enumerate() {
        match a {
            ProjRat::Infinity => report.infinite_roots.push(r),
            ProjRat::Finite(q) => {
                if matches!(p.val(q), Order::Finite(n) if n < 0) {
                    report.non_integral.push(r);
                }
                finite.push((r, q));
            }
        }
    }
    for (x, &(r, a)) in finite.iter().enumerate() {
        for &(s, b) in &finite[x + 1..] {
            if let Order::Finite(n) = p.val(&(a - b)) {
                if n % 2 != 0 {
                    report.odd_valuations.push((r, s, n));
                }
            }
        }
    }
    let mut classes: Vec<BigInt> = finite.iter().filter_map(|(_, q)| p.residue(q, 1)).collect();
    classes.sort();
    classes.dedup();
    report.residue_classes = classes.len();
    report
}

/// A node of the tree: a residue class mod p^level holding at least two roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterNode {
    pub level: i64,
    /// Root index whose value is used as `a_C`.
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ClusterNode {
    pub fn contains(&self, r: usize) -> bool {
        self.members.contains(&r)
    }

    /// The same class with another member as representative.
    pub fn with_representative(&self, r: usize) -> Option<ClusterNode> {
        self.contains(r).then(|| ClusterNode {
            representative: r,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterTree {
    #[serde(skip)]
    prime: Prime,
    genus: u32,
    #[serde(skip)]
    roots: Vec<Rat>,
    nodes: Vec<ClusterNode>,
    parent: Vec<Option<usize>>,
    /// `λ_r`: index of the deepest node containing root r.
    root_node: Vec<usize>,
    /// `n_r = max_{s≠r} ν(a_r − a_s)`.
    root_level: Vec<i64>,
}

impl ClusterTree {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn roots(&self) -> &[Rat] {
        &self.roots
    }

    pub fn nodes(&self) -> &[ClusterNode] {
        &self.nodes
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn root_level(&self, r: usize) -> i64 {
        self.root_level[r]
    }

    /// `C_r`, the component through the section of root r.
    pub fn component(&self, r: usize) -> &ClusterNode {
        &self.nodes[self.root_node[r]]
    }

    pub fn max_level(&self) -> i64 {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    fn val(&self, r: usize, s: usize) -> Order {
        self.prime.val(&(&self.roots[r] - &self.roots[s]))
    }

    /// `ν_C(x − a_r) = min{n_C, ν(a_C − a_r)}`.
    pub fn mult_x(&self, c: &ClusterNode, r: usize) -> i64 {
        self.val(c.representative, r).min_with(c.level)
    }

    /// `ν_C(y) = ½ Σ_r ν_C(x − a_r)`, from `y² = ∏ (x − a_r)`.
    pub fn mult_y(&self, c: &ClusterNode) -> Rat {
        let s: i64 = (0..self.roots.len()).map(|r| self.mult_x(c, r)).sum();
        Rat::new(s.into(), 2.into())
    }

    /// Multiplicity `μ_k(C)` of the component `C` in `V_k`:
    /// `(g−1) min{n_C, ν(a_k − a_C)} − ν_C(y) + n_C − (g−½) n_k + ½ Σ_{r≠k} ν(a_k − a_r)`.
    pub fn v_mult(&self, k: usize, c: &ClusterNode) -> Rat {
        let g = self.genus as i64;
        let n_k = self.root_level[k];
        let sum_k: i64 = (0..self.roots.len())
            .filter(|&r| r != k)
            .map(|r| self.val(k, r).finite().expect("distinct roots"))
            .sum();
        int((g - 1) * self.mult_x(c, k)) - self.mult_y(c) + int(c.level)
            - Rat::new(((2 * g - 1) * n_k).into(), 2.into())
            + Rat::new(sum_k.into(), 2.into())
    }
}

/// Builds the residue-class tree; the config must be in Kausz normal form.
pub fn build_tree(cfg: &RootConfig, p: Prime) -> Result<ClusterTree> {
    p.require_odd()?;
    let report = check_kausz_form(cfg, p);
    if !report.passed() {
        return Err(Error::NotKauszForm(report));
    }
    let roots: Vec<Rat> = cfg
        .roots()
        .iter()
        .map(|r| r.finite().expect("checked finite").clone())
        .collect();
    let n = roots.len();

    let mut root_level = vec![0i64; n];
    for r in 0..n {
        root_level[r] = (0..n)
            .filter(|&s| s != r)
            .map(|s| p.val(&(&roots[r] - &roots[s])).finite().expect("distinct"))
            .max()
            .unwrap_or(0);
    }
    let top = root_level.iter().copied().max().unwrap_or(0);

    let mut nodes: Vec<ClusterNode> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    // node index of root r's class at the previous level, if that class is a node
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut root_node = vec![0usize; n];
    for level in 0..=top {
        let mut classes: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
        for (r, a) in roots.iter().enumerate() {
            let key = if level == 0 {
                BigInt::zero()
            } else {
                p.residue(a, level as u32).expect("integral")
            };
            classes.entry(key).or_default().push(r);
        }
        let mut groups: Vec<Vec<usize>> = classes.into_values().filter(|m| m.len() >= 2).collect();
        groups.sort();
        let mut current = vec![None; n];
        for members in groups {
            let id = nodes.len();
            parent.push(prev[members[0]]);
            for &r in &members {
                current[r] = Some(id);
                if root_level[r] == level {
                    root_node[r] = id;
                }
            }
            nodes.push(ClusterNode {
                level,
                representative: members[0],
                members,
            });
        }
        prev = current;
    }

    Ok(ClusterTree {
        prime: p,
        genus: cfg.genus(),
        roots,
        nodes,
        parent,
        root_node,
        root_level,
    })
}

/// `(2g−1)(W_i − W_j, V_k) + (V_i − V_j, W_k)` from the multiplicities on
/// the root-carrying components, using `(W_a, V_b) = μ_b(C_a)`.
pub fn pairing_combination_in(tree: &ClusterTree, t: Triple) -> Result<Rat> {
    t.check(tree.roots.len())?;
    let g = tree.genus as i64;
    let (ci, cj, ck) = (
        tree.component(t.i),
        tree.component(t.j),
        tree.component(t.k),
    );
    let w_minus_w_v = tree.v_mult(t.k, ci) - tree.v_mult(t.k, cj);
    let v_minus_v_w = tree.v_mult(t.i, ck) - tree.v_mult(t.j, ck);
    Ok(int(2 * g - 1) * w_minus_w_v + v_minus_v_w)
}

pub fn pairing_combination(cfg: &RootConfig, p: Prime, t: Triple) -> Result<Rat> {
    t.check(cfg.len())?;
    let tree = build_tree(cfg, p)?;
    pairing_combination_in(&tree, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(roots: &[i64]) -> RootConfig {
        RootConfig::from_finite(2, roots.iter().map(|&x| int(x))).unwrap()
    }

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn worked_tree() -> ClusterTree {
        build_tree(&cfg(&[0, 9, 1, 10, 2, 11]), p3()).unwrap()
    }

    #[test]
    fn kausz_checks() {
        assert!(check_kausz_form(&cfg(&[0, 9, 1, 10, 2, 11]), p3()).passed());

        let odd = check_kausz_form(&cfg(&[0, 3, 1, 4, 2, 5]), p3());
        assert!(!odd.passed());
        assert_eq!(odd.odd_valuations.len(), 3);
        assert!(odd.odd_valuations.iter().all(|&(_, _, n)| n == 1));

        let two = check_kausz_form(&cfg(&[0, 9, 1, 10, 28, 55]), p3());
        assert!(!two.passed());
        assert_eq!(two.residue_classes, 2);

        let frac = RootConfig::from_finite(
            2,
            [
                int(0),
                int(1),
                int(2),
                crate::numeric::rat(1, 3),
                int(4),
                int(5),
            ],
        )
        .unwrap();
        let r = check_kausz_form(&frac, p3());
        assert_eq!(r.non_integral, vec![3]);
        assert!(matches!(
            build_tree(&frac, p3()),
            Err(Error::NotKauszForm(_))
        ));
    }

    #[test]
    fn worked_tree_shape() {
        let t = worked_tree();
        let levels: Vec<(i64, Vec<usize>)> = t
            .nodes()
            .iter()
            .map(|n| (n.level, n.members.clone()))
            .collect();
        assert_eq!(
            levels,
            vec![
                (0, vec![0, 1, 2, 3, 4, 5]),
                (1, vec![0, 1]),
                (1, vec![2, 3]),
                (1, vec![4, 5]),
                (2, vec![0, 1]),
                (2, vec![2, 3]),
                (2, vec![4, 5]),
            ]
        );
        assert_eq!(t.parent(0), None);
        assert_eq!(t.parent(1), Some(0));
        assert_eq!(t.parent(4), Some(1));
        assert_eq!(t.parent(6), Some(3));
        for r in 0..6 {
            assert_eq!(t.root_level(r), 2);
            assert_eq!(t.component(r).level, 2);
            assert!(t.component(r).contains(r));
        }
    }

    #[test]
    fn unclustered_roots_give_single_node() {
        // p = 7, pairwise differences all units
        let t = build_tree(&cfg(&[0, 1, 2, 3, 4, 5]), Prime::new(7).unwrap()).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert_eq!(t.max_level(), 0);
        let c = &t.nodes()[0];
        for r in 0..6 {
            assert_eq!(t.mult_x(c, r), 0);
        }
        assert_eq!(t.mult_y(c), int(0));
    }

    #[test]
    fn scaled_roots_rejected() {
        // scaling by p² collapses everything into one class mod p
        let r = build_tree(&cfg(&[0, 81, 9, 90, 18, 99]), p3());
        assert!(matches!(r, Err(Error::NotKauszForm(rep)) if rep.residue_classes == 1));
    }

    #[test]
    fn multiplicities_worked_vector() {
        let t = worked_tree();
        let c09 = t.component(0).clone();
        assert_eq!(t.mult_x(&c09, 1), 2);
        let c110 = t.component(2).clone();
        assert_eq!(t.mult_x(&c110, 0), 0);
        let top = t.nodes()[0].clone();
        for r in 0..6 {
            assert_eq!(t.mult_x(&top, r), 0);
        }
        assert_eq!(t.mult_y(&top), int(0));
        assert_eq!(t.mult_y(&c09), int(2));
        // μ_k(C_i) with a_k = 1, a_i = 0
        assert_eq!(t.v_mult(2, &c09), int(-2));
    }

    #[test]
    fn mult_y_special_case_and_v_mult_vanishes_on_own_component() {
        let t = worked_tree();
        let p = t.prime();
        for k in 0..6 {
            let ck = t.component(k).clone();
            let sum: i64 = (0..6)
                .filter(|&r| r != k)
                .map(|r| p.val(&(&t.roots()[k] - &t.roots()[r])).finite().unwrap())
                .sum();
            assert_eq!(
                t.mult_y(&ck),
                Rat::new((t.root_level(k) + sum).into(), 2.into())
            );
            assert_eq!(t.v_mult(k, &ck), int(0));
        }
    }

    #[test]
    fn representative_independence() {
        let t = worked_tree();
        for node in t.nodes() {
            for &rep in &node.members {
                let alt = node.with_representative(rep).unwrap();
                for r in 0..6 {
                    assert_eq!(t.mult_x(&alt, r), t.mult_x(node, r));
                }
                assert_eq!(t.mult_y(&alt), t.mult_y(node));
            }
        }
    }

    #[test]
    fn combination_worked_vector() {
        let c = cfg(&[0, 9, 1, 10, 2, 11]);
        assert_eq!(
            pairing_combination(&c, p3(), Triple::new(0, 2, 1)).unwrap(),
            int(8)
        );
        let unram = cfg(&[0, 1, 2, 3, 4, 5]);
        for t in unram.triples() {
            assert_eq!(
                pairing_combination(&unram, Prime::new(7).unwrap(), t).unwrap(),
                int(0)
            );
        }
        assert_eq!(
            pairing_combination(&c, Prime::new(2).unwrap(), Triple::new(0, 1, 2)),
            Err(Error::CharacteristicTwo)
        );
    }
}
