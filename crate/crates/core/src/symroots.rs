//! Symmetric roots and symmetric discriminants of a hyperelliptic curve
//! given by its branch points, and the admissible-pairing values they encode
//! over a p-adic place.
//!
//! A symmetric root `ℓ_ijk` is only defined up to a 2g-th root of unity, so
//! the canonical exact datum here is `ℓ_ijk^{2g}` together with
//! `ν(ℓ_ijk) = ν(ℓ_ijk^{2g}) / 2g`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{int, Order, Prime, ProjRat, Rat};

/// Genus plus the `2g + 2` branch points on P¹(ℚ).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct RootConfig {
    genus: u32,
    roots: Vec<ProjRat>,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    genus: u32,
    roots: Vec<ProjRat>,
}

impl TryFrom<RawConfig> for RootConfig {
    type Error = Error;
    fn try_from(r: RawConfig) -> Result<Self> {
        RootConfig::new(r.genus, r.roots)
    }
}

impl From<RootConfig> for RawConfig {
    fn from(c: RootConfig) -> Self {
        RawConfig {
            genus: c.genus,
            roots: c.roots,
        }
    }
}

impl RootConfig {
    pub fn new(genus: u32, roots: Vec<ProjRat>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidConfig(format!("genus {genus} < 2")));
        }
        let want = 2 * genus as usize + 2;
        if roots.len() != want {
            return Err(Error::InvalidConfig(format!(
                "genus {genus} needs {want} roots, got {}",
                roots.len()
            )));
        }
        if roots.iter().filter(|r| r.is_infinite()).count() > 1 {
            return Err(Error::InvalidConfig(
                "more than one root at infinity".into(),
            ));
        }
        for (s, a) in roots.iter().enumerate() {
            if let Some(r) = roots[..s].iter().position(|b| b == a) {
                return Err(Error::Degenerate(format!(
                    "roots {r} and {s} coincide ({a})"
                )));
            }
        }
        Ok(RootConfig { genus, roots })
    }

    /// Convenience constructor from finite rationals.
    pub fn from_finite(genus: u32, roots: impl IntoIterator<Item = Rat>) -> Result<Self> {
        Self::new(genus, roots.into_iter().map(ProjRat::Finite).collect())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn roots(&self) -> &[ProjRat] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.roots.iter().all(|r| !r.is_infinite())
    }

    /// The roots as affine values, after moving ∞ to a finite point if needed.
    /// All quantities in this module are Möbius invariant, so this does not
    /// change any output.
    pub fn affine_roots(&self) -> Vec<Rat> {
        normalize_finite(self)
            .config
            .roots
            .into_iter()
            .map(|r| match r {
                ProjRat::Finite(q) => q,
                ProjRat::Infinity => unreachable!("normalized config has no infinite root"),
            })
            .collect()
    }

    pub fn triples(&self) -> impl Iterator<Item = Triple> {
        let n = self.len();
        (0..n).flat_map(move |i| {
            (0..n).flat_map(move |j| {
                (0..n)
                    .filter(move |&k| i != j && k != i && k != j)
                    .map(move |k| Triple { i, j, k })
            })
        })
    }
}

/// Three pairwise distinct root indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Triple {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        Triple { i, j, k }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        check_distinct(&[self.i, self.j, self.k], n)
    }

    /// `(j, i, k)`.
    pub fn swapped(&self) -> Self {
        Triple::new(self.j, self.i, self.k)
    }

    /// `(j, k, i)`.
    pub fn rotated(&self) -> Self {
        Triple::new(self.j, self.k, self.i)
    }

    pub fn key(&self) -> String {
        format!("({},{},{})", self.i, self.j, self.k)
    }
}

impl std::str::FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("not an index triple: {s:?}")))?;
        match parts[..] {
            [i, j, k] => Ok(Triple::new(i, j, k)),
            _ => Err(Error::Parse(format!("not an index triple: {s:?}"))),
        }
    }
}

fn check_distinct(idx: &[usize], n: usize) -> Result<()> {
    for (a, &x) in idx.iter().enumerate() {
        if x >= n {
            return Err(Error::InvalidIndices(format!(
                "index {x} out of range 0..{n}"
            )));
        }
        if idx[..a].contains(&x) {
            return Err(Error::InvalidIndices(format!(
                "repeated index {x} in {idx:?}"
            )));
        }
    }
    Ok(())
}

/// Result of [`normalize_finite`]: the config, and the `c` of the
/// substitution `x ↦ 1/(x − c)` when one was applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub config: RootConfig,
    pub shift: Option<Rat>,
}

impl Normalized {
    pub fn note(&self) -> String {
        match &self.shift {
            None => "identity".to_string(),
            Some(c) => format!("x -> 1/(x - {c})"),
        }
    }
}

/// Moves a root at infinity to a finite point via `x ↦ 1/(x − c)`, with `c`
/// the least non-negative integer that is not a root.
pub fn normalize_finite(cfg: &RootConfig) -> Normalized {
    if cfg.is_finite() {
        return Normalized {
            config: cfg.clone(),
            shift: None,
        };
    }
    let c = (0i64..)
        .map(int)
        .find(|c| !cfg.roots.iter().any(|r| r.finite() == Some(c)))
        .expect("finitely many roots");
    let map = Moebius::new(int(0), int(1), int(1), -c.clone()).expect("det = -1");
    let roots = cfg.roots.iter().map(|r| map.apply(r)).collect();
    Normalized {
        config: RootConfig {
            genus: cfg.genus,
            roots,
        },
        shift: Some(c),
    }
}

/// Fractional linear map `x ↦ (a x + b)/(c x + d)` with `ad − bc ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moebius {
    a: Rat,
    b: Rat,
    c: Rat,
    d: Rat,
}

impl Moebius {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::Degenerate("Möbius map with zero determinant".into()));
        }
        Ok(Moebius { a, b, c, d })
    }

    pub fn apply(&self, x: &ProjRat) -> ProjRat {
        match x {
            ProjRat::Infinity => {
                if self.c.is_zero() {
                    ProjRat::Infinity
                } else {
                    ProjRat::Finite(&self.a / &self.c)
                }
            }
            ProjRat::Finite(x) => {
                let den = &self.c * x + &self.d;
                if den.is_zero() {
                    ProjRat::Infinity
                } else {
                    ProjRat::Finite((&self.a * x + &self.b) / den)
                }
            }
        }
    }

    pub fn apply_config(&self, cfg: &RootConfig) -> RootConfig {
        RootConfig {
            genus: cfg.genus,
            roots: cfg.roots.iter().map(|r| self.apply(r)).collect(),
        }
    }
}

/// `∏_{r ≠ i,j} (a_j − a_r)/(a_i − a_r)`, the 2g-th power of the common
/// scaling factor.
fn scale_pow(a: &[Rat], i: usize, j: usize) -> Rat {
    (0..a.len())
        .filter(|&r| r != i && r != j)
        .map(|r| (&a[j] - &a[r]) / (&a[i] - &a[r]))
        .fold(Rat::one(), |acc, x| acc * x)
}

/// `ℓ_ijk^{2g}`.
pub fn symroot_pow(cfg: &RootConfig, t: Triple) -> Result<Rat> {
    t.check(cfg.len())?;
    let a = cfg.affine_roots();
    let g2 = 2 * cfg.genus() as i32;
    let ratio = (&a[t.i] - &a[t.k]) / (&a[t.j] - &a[t.k]);
    Ok(num_traits::pow::Pow::pow(&ratio, g2) * scale_pow(&a, t.i, t.j))
}

fn finite_val(p: Prime, q: &Rat) -> Result<i64> {
    match p.val(q) {
        Order::Finite(n) => Ok(n),
        Order::Infinite => Err(Error::Degenerate("zero where a unit was expected".into())),
    }
}

/// `ν(ℓ_ijk) = ν(ℓ_ijk^{2g}) / 2g`.
pub fn symroot_val(cfg: &RootConfig, p: Prime, t: Triple) -> Result<Rat> {
    p.require_odd()?;
    let l = symroot_pow(cfg, t)?;
    Ok(Rat::new(
        finite_val(p, &l)?.into(),
        (2 * cfg.genus() as i64).into(),
    ))
}

/// Cross-ratio `μ_ijkr = (a_i − a_k)/(a_j − a_k) · (a_j − a_r)/(a_i − a_r)`.
pub fn cross_ratio(cfg: &RootConfig, i: usize, j: usize, k: usize, r: usize) -> Result<Rat> {
    check_distinct(&[i, j, k, r], cfg.len())?;
    let a = cfg.affine_roots();
    Ok((&a[i] - &a[k]) / (&a[j] - &a[k]) * (&a[j] - &a[r]) / (&a[i] - &a[r]))
}

/// Symmetric discriminant `d_ij = ∏_{r ≠ s; r,s ∉ {i,j}} (ℓ_ijr − ℓ_ijs)`.
///
/// With `ℓ_ijr = m_r · t` and `m_r = (a_i − a_r)/(a_j − a_r)`, this is
/// `(t^{2g})^{2g−1} · ∏_{r ≠ s} (m_r − m_s)`, which needs no root extraction.
pub fn sym_discriminant(cfg: &RootConfig, i: usize, j: usize) -> Result<Rat> {
    check_distinct(&[i, j], cfg.len())?;
    let a = cfg.affine_roots();
    let m: Vec<Rat> = (0..a.len())
        .filter(|&r| r != i && r != j)
        .map(|r| (&a[i] - &a[r]) / (&a[j] - &a[r]))
        .collect();
    // accumulate numerator and denominator separately, reduce once
    let t = num_traits::pow::Pow::pow(&scale_pow(&a, i, j), 2 * cfg.genus() as i32 - 1);
    let (mut num, mut den) = (t.numer().clone(), t.denom().clone());
    for (r, mr) in m.iter().enumerate() {
        for (s, ms) in m.iter().enumerate() {
            if r != s {
                let d = mr - ms;
                num *= d.numer();
                den *= d.denom();
            }
        }
    }
    let prod = Rat::new(num, den);
    if prod.is_zero() {
        return Err(Error::Degenerate("vanishing symmetric discriminant".into()));
    }
    Ok(prod)
}

/// `(w_i − w_j, w_k)_a` in ν units, equal to `ν(ℓ_ijk)/2`.
pub fn pairing_diff_thm_c(cfg: &RootConfig, p: Prime, t: Triple) -> Result<Rat> {
    Ok(symroot_val(cfg, p, t)? / int(2))
}

/// `(w_i − w_j, w_k − w_r)_a` in ν units, equal to `ν(μ_ijkr)/2`.
pub fn pairing_crossratio(
    cfg: &RootConfig,
    p: Prime,
    i: usize,
    j: usize,
    k: usize,
    r: usize,
) -> Result<Rat> {
    p.require_odd()?;
    let mu = cross_ratio(cfg, i, j, k, r)?;
    Ok(Rat::new(finite_val(p, &mu)?.into(), 2.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn cfg(g: u32, roots: &[i64]) -> RootConfig {
        RootConfig::from_finite(g, roots.iter().map(|&x| int(x))).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn worked() -> RootConfig {
        cfg(2, &[0, 9, 1, 10, 2, 11])
    }

    #[test]
    fn symroot_pow_direct_value() {
        let c = cfg(2, &[0, 1, 2, 3, 4, 5]);
        // ((0-2)/(1-2))^4 · (1-2)/(0-2) · (1-3)/(0-3) · (1-4)/(0-4) · (1-5)/(0-5)
        assert_eq!(symroot_pow(&c, Triple::new(0, 1, 2)).unwrap(), rat(16, 5));
    }

    #[test]
    fn antisymmetry_and_translation() {
        let c = cfg(2, &[0, 1, 2, 3, 4, 5]);
        let shifted = cfg(2, &[7, 8, 9, 10, 11, 12]);
        for t in c.triples() {
            let l = symroot_pow(&c, t).unwrap();
            assert_eq!(&l * symroot_pow(&c, t.swapped()).unwrap(), int(1));
            assert_eq!(symroot_pow(&shifted, t).unwrap(), l);
        }
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            RootConfig::new(
                2,
                vec![
                    ProjRat::Infinity,
                    ProjRat::Infinity,
                    int(1).into(),
                    int(2).into(),
                    int(3).into(),
                    int(4).into()
                ]
            ),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            RootConfig::from_finite(2, [0, 1, 2, 3, 4].map(int)),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            RootConfig::from_finite(2, [0, 1, 2, 3, 4, 4].map(int)),
            Err(Error::Degenerate(_))
        ));
        assert!(RootConfig::from_finite(1, [0, 1, 2, 3].map(int)).is_err());
    }

    #[test]
    fn normalize_moves_infinity() {
        let mut roots: Vec<ProjRat> = vec![ProjRat::Infinity];
        roots.extend((0..5).map(|x| ProjRat::Finite(int(x))));
        let c = RootConfig::new(2, roots).unwrap();
        let n = normalize_finite(&c);
        assert!(n.config.is_finite());
        assert_eq!(n.shift, Some(int(5)));
        assert_eq!(n.note(), "x -> 1/(x - 5)");

        let f = worked();
        let n = normalize_finite(&f);
        assert_eq!(n.config, f);
        assert_eq!(n.shift, None);
    }

    #[test]
    fn infinity_config_agrees_with_moebius_image() {
        let mut roots: Vec<ProjRat> = vec![ProjRat::Infinity];
        roots.extend([0, 1, 3, 7, 12].map(|x| ProjRat::Finite(int(x))));
        let c = RootConfig::new(2, roots).unwrap();
        let m = Moebius::new(int(2), int(1), int(1), int(-20)).unwrap();
        let image = m.apply_config(&c);
        for t in c.triples() {
            assert_eq!(symroot_pow(&c, t).unwrap(), symroot_pow(&image, t).unwrap());
        }
    }

    #[test]
    fn symroot_val_worked_vector() {
        let c = worked();
        // (a_i, a_j, a_k) = (0, 1, 9)
        assert_eq!(symroot_val(&c, p(3), Triple::new(0, 2, 1)).unwrap(), int(2));
        // (0, 9, 1)
        assert_eq!(symroot_val(&c, p(3), Triple::new(0, 1, 2)).unwrap(), int(0));
        assert_eq!(
            symroot_val(&c, p(2), Triple::new(0, 1, 2)),
            Err(Error::CharacteristicTwo)
        );
    }

    #[test]
    fn unramified_config_is_zero() {
        // pairwise differences all prime to 7
        let c = cfg(2, &[0, 1, 2, 3, 4, 5]);
        for t in c.triples() {
            assert_eq!(symroot_val(&c, p(7), t).unwrap(), int(0));
            assert_eq!(pairing_diff_thm_c(&c, p(7), t).unwrap(), int(0));
        }
        assert_eq!(pairing_crossratio(&c, p(7), 0, 1, 2, 3).unwrap(), int(0));
    }

    #[test]
    fn cross_ratio_value_and_errors() {
        let c = cfg(2, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(cross_ratio(&c, 0, 1, 2, 3).unwrap(), rat(4, 3));
        assert!(matches!(
            cross_ratio(&c, 0, 1, 2, 2),
            Err(Error::InvalidIndices(_))
        ));
        assert!(matches!(
            cross_ratio(&c, 0, 1, 2, 6),
            Err(Error::InvalidIndices(_))
        ));
    }

    #[test]
    fn thm_c_worked_vector() {
        let c = worked();
        let t = Triple::new(0, 2, 1);
        assert_eq!(pairing_diff_thm_c(&c, p(3), t).unwrap(), int(1));
        assert_eq!(pairing_diff_thm_c(&c, p(3), t.swapped()).unwrap(), int(-1));
        // roots 0, 1, 9, 10: μ = (9/8)(9/10), ν_3(μ) = 4
        let mu = cross_ratio(&c, 0, 2, 1, 3).unwrap();
        assert_eq!(mu, rat(-9, -8) * rat(-9, -10));
        assert_eq!(pairing_crossratio(&c, p(3), 0, 2, 1, 3).unwrap(), int(2));
    }

    #[test]
    fn crossratio_is_difference_of_thm_c() {
        let c = worked();
        let n = c.len();
        for t in c.triples() {
            for r in (0..n).filter(|&r| r != t.i && r != t.j && r != t.k) {
                let lhs = pairing_crossratio(&c, p(3), t.i, t.j, t.k, r).unwrap();
                let rhs = pairing_diff_thm_c(&c, p(3), t).unwrap()
                    - pairing_diff_thm_c(&c, p(3), Triple::new(t.i, t.j, r)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn discriminant_identities_small() {
        let c = cfg(3, &[-4, 0, 1, 3, 7, 8, 15, 22]);
        let n = c.len();
        for i in 0..n {
            let prod = (0..n)
                .filter(|&k| k != i)
                .map(|k| sym_discriminant(&c, i, k).unwrap())
                .fold(int(1), |a, b| a * b);
            assert_eq!(prod, int(1));
        }
        let t = Triple::new(2, 5, 0);
        let lhs = sym_discriminant(&c, t.i, t.k).unwrap() / sym_discriminant(&c, t.j, t.k).unwrap();
        let l = symroot_pow(&c, t).unwrap();
        assert_eq!(lhs, -num_traits::pow::Pow::pow(&l, 7i32));
    }

    #[test]
    fn triple_parsing() {
        assert_eq!("0,1,2".parse::<Triple>().unwrap(), Triple::new(0, 1, 2));
        assert_eq!("(3, 1,2)".parse::<Triple>().unwrap(), Triple::new(3, 1, 2));
        assert!("0,1".parse::<Triple>().is_err());
        assert_eq!(worked().triples().count(), 6 * 5 * 4);
    }
}
