//! Seeded generators for the verification suites.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::metgraph::MetrizedGraph;
use crate::numeric::{int, rat, ProjRat, Rat};
use crate::symroots::{Moebius, RootConfig};

/// Distinct integers in `[−10p², 10p²]`; occasionally one root is moved to
/// ∞ or replaced by a fraction.
pub fn random_config<R: Rng>(rng: &mut R, genus: u32, p: u64) -> RootConfig {
    let n = 2 * genus as usize + 2;
    let bound = 10 * (p * p) as i64;
    let mut roots: Vec<ProjRat> = Vec::with_capacity(n);
    while roots.len() < n {
        let x = if rng.gen_ratio(1, 8) {
            rat(rng.gen_range(-bound..=bound), rng.gen_range(2..=5))
        } else {
            int(rng.gen_range(-bound..=bound))
        };
        let x = ProjRat::Finite(x);
        if !roots.contains(&x) {
            roots.push(x);
        }
    }
    if rng.gen_ratio(1, 5) {
        let i = rng.gen_range(0..n);
        roots[i] = ProjRat::Infinity;
    }
    RootConfig::new(genus, roots).expect("distinct by construction")
}

/// Integral roots with pairwise even valuations spread over at least three
/// residue classes mod `p`.
///
/// The top level splits the roots into 3..=min(p, n) residue classes; a class
/// with several roots continues as `r + p²·(inner cluster)`, recursively.
pub fn kausz_config<R: Rng>(rng: &mut R, genus: u32, p: u64) -> RootConfig {
    let n = 2 * genus as usize + 2;
    let p = p as i128;
    let top = rng.gen_range(3..=n.min(p as usize));
    let mut roots = split(rng, n, top, p, 0);
    let offset = rng.gen_range(-10 * p * p..=10 * p * p);
    roots.shuffle(rng);
    RootConfig::from_finite(
        genus,
        roots
            .into_iter()
            .map(|x| Rat::from_integer(BigInt::from(x + offset))),
    )
    .expect("distinct by construction")
}

fn split<R: Rng>(rng: &mut R, n: usize, groups: usize, p: i128, depth: u32) -> Vec<i128> {
    let mut residues: Vec<i128> = (0..p).collect();
    residues.shuffle(rng);
    let sizes = composition(rng, n, groups);
    let mut out = Vec::with_capacity(n);
    for (s, r) in sizes.into_iter().zip(residues) {
        if s == 1 {
            out.push(r);
            continue;
        }
        let max = s.min(p as usize);
        let inner_groups = if depth >= 2 {
            // keep the numbers small: split for real from here on
            rng.gen_range(2.min(max)..=max)
        } else {
            rng.gen_range(1..=max)
        };
        for x in split(rng, s, inner_groups, p, depth + 1) {
            out.push(r + p * p * x);
        }
    }
    out
}

/// Random composition of `n` into `k` positive parts.
fn composition<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut sizes = vec![1; k];
    for _ in k..n {
        let i = rng.gen_range(0..k);
        sizes[i] += 1;
    }
    sizes
}

/// `x ↦ (ax + b)/(cx + d)` with small integer coefficients and `ad ≠ bc`.
pub fn random_moebius<R: Rng>(rng: &mut R) -> Moebius {
    loop {
        let mut c = || int(rng.gen_range(-5..=5));
        if let Ok(m) = Moebius::new(c(), c(), c(), c()) {
            return m;
        }
    }
}

/// A positive rational with small numerator and denominator.
pub fn random_length<R: Rng>(rng: &mut R) -> Rat {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

/// A point strictly inside `(0, len)`.
pub fn random_offset<R: Rng>(rng: &mut R, len: &Rat) -> Rat {
    let d = rng.gen_range(2..=7);
    len * rat(rng.gen_range(1..d), d)
}

/// Connected multigraph with loops, 1..=4 vertices and total genus ≥ 2.
pub fn random_graph<R: Rng>(rng: &mut R) -> MetrizedGraph {
    let nv = rng.gen_range(1..=4usize);
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut genus: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..=1)).collect();
    let mut edges: Vec<(usize, usize, Rat)> = (1..nv)
        .map(|v| (rng.gen_range(0..v), v, random_length(rng)))
        .collect();
    for _ in 0..rng.gen_range(0..=3) {
        edges.push((
            rng.gen_range(0..nv),
            rng.gen_range(0..nv),
            random_length(rng),
        ));
    }
    let betti = edges.len() + 1 - nv;
    let total = betti as u32 + genus.iter().sum::<u32>();
    if total < 2 {
        genus[0] += 2 - total;
    }
    let vs: Vec<(&str, u32)> = names.iter().map(String::as_str).zip(genus).collect();
    let es: Vec<(&str, &str, Rat)> = edges
        .into_iter()
        .map(|(u, v, l)| (names[u].as_str(), names[v].as_str(), l))
        .collect();
    MetrizedGraph::build(&vs, &es).expect("connected by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustertree::check_kausz_form;
    use crate::numeric::Prime;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kausz_constructor_passes_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [3u64, 5, 7] {
            for g in 2..=4 {
                for _ in 0..20 {
                    let c = kausz_config(&mut rng, g, p);
                    let r = check_kausz_form(&c, Prime::new(p).unwrap());
                    assert!(r.passed(), "{c:?}: {}", r.summary());
                }
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_config(&mut ChaCha8Rng::seed_from_u64(9), 3, 5);
        let b = random_config(&mut ChaCha8Rng::seed_from_u64(9), 3, 5);
        assert_eq!(a, b);
        let g1 = random_graph(&mut ChaCha8Rng::seed_from_u64(4));
        let g2 = random_graph(&mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(g1, g2);
        assert!(g1.total_genus() >= 2);
    }
}
