//! Generic points and the two exact counting oracles.
//!
//! A point is generic when it avoids every reflecting hyperplane and every
//! hyperplane spanned by roots. Both conditions reduce to finitely many
//! linear functionals not vanishing, so genericity is exactly decidable.
//! On generic points two independent counts are available: the number of
//! group translates of the simple cone containing the point, and the number
//! of orbit points landing strictly inside the dual description of the
//! fundamental chamber. They must always agree.

use crate::error::{Error, Result};
use crate::group::ReflectionGroup;
use crate::linalg::{Matrix, Vector};
use crate::roots::RootSystem;
use crate::scalar::Scalar;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Default ceiling on the number of (n−1)-subsets of positive roots
/// enumerated for the hyperplane part of the certificate. H4 needs
/// C(60,3) = 34,220; E6 would need 376,992 and falls back.
pub const DEFAULT_SUBSET_BUDGET: u64 = 200_000;

/// Cap on rejection-sampling attempts per requested point.
const MAX_SAMPLE_ATTEMPTS: u64 = 1_000;

/// What the genericity test actually checked.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// All reflecting hyperplanes and all root-spanned hyperplanes.
    Full { hyperplanes: usize },
    /// Only the reflecting hyperplanes; the subset enumeration was over
    /// budget. Weaker: points may still sit on a root-spanned hyperplane.
    ReflectionsOnly,
}

/// A sampled rational point together with its certificate and the number
/// of draws rejected before it was found.
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub point: Vector,
    pub certificate: Certificate,
    pub rejected: u64,
}

/// Precomputed linear functionals whose non-vanishing certifies genericity.
#[derive(Clone, Debug)]
pub struct GenericityContext {
    /// One functional per reflecting hyperplane: x ↦ (x, α).
    root_functionals: Vec<Vector>,
    /// One functional per root-spanned hyperplane, or None when the
    /// subset enumeration was over budget.
    hyperplane_functionals: Option<Vec<Vector>>,
    /// Size of the subset enumeration that was (or would be) needed.
    subsets: u64,
    ambient_dim: usize,
}

impl GenericityContext {
    pub fn new(rs: &RootSystem) -> Result<GenericityContext> {
        GenericityContext::with_budget(rs, DEFAULT_SUBSET_BUDGET)
    }

    pub fn with_budget(rs: &RootSystem, budget: u64) -> Result<GenericityContext> {
        let n = rs.ambient_dim();
        if rs.rank() != n {
            return Err(Error::InvalidArgument(
                "genericity needs a base spanning the ambient space".into(),
            ));
        }
        let mut seen: HashSet<Vec<Scalar>> = HashSet::new();
        let mut root_functionals = Vec::new();
        for alpha in rs.positive_roots() {
            let f = rs.form().mul_vec(alpha)?.direction_normalized();
            if seen.insert(f.iter().cloned().collect()) {
                root_functionals.push(f);
            }
        }
        let m = rs.num_positive_roots();
        let subsets = binomial(m as u64, (n - 1) as u64);
        let hyperplane_functionals = if n == 1 {
            // The only 0-dimensional span is the origin, which the root
            // functionals already exclude.
            Some(Vec::new())
        } else if subsets > budget {
            None
        } else {
            let mut fns = Vec::new();
            let mut seen: HashSet<Vec<Scalar>> = HashSet::new();
            for combo in Combinations::new(m, n - 1) {
                let rows: Vec<Vector> = combo
                    .iter()
                    .map(|&i| rs.positive_roots()[i].clone())
                    .collect();
                let kernel = Matrix::from_rows(rows).kernel_basis();
                if kernel.len() == 1 {
                    let f = kernel.into_iter().next().unwrap().direction_normalized();
                    if seen.insert(f.iter().cloned().collect()) {
                        fns.push(f);
                    }
                }
            }
            Some(fns)
        };
        Ok(GenericityContext {
            root_functionals,
            hyperplane_functionals,
            subsets,
            ambient_dim: n,
        })
    }

    pub fn certificate(&self) -> Certificate {
        match &self.hyperplane_functionals {
            Some(fns) => Certificate::Full {
                hyperplanes: fns.len(),
            },
            None => Certificate::ReflectionsOnly,
        }
    }

    fn passes(&self, x: &Vector) -> Result<bool> {
        for f in &self.root_functionals {
            if f.dot(x)?.is_zero() {
                return Ok(false);
            }
        }
        if let Some(fns) = &self.hyperplane_functionals {
            for f in fns {
                if f.dot(x)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Exact genericity. Errors when only the weaker reflections-only
    /// certificate is available.
    pub fn is_generic(&self, x: &Vector) -> Result<bool> {
        if self.hyperplane_functionals.is_none() {
            return Err(Error::CertificateBudget {
                subsets: self.subsets,
                budget: DEFAULT_SUBSET_BUDGET,
            });
        }
        self.passes(x)
    }

    /// Rejection-sample a generic rational point: coordinates are fractions
    /// with numerators in −bound..=bound and denominators in 1..=bound.
    /// Deterministic for a fixed seed.
    pub fn sample(&self, seed: u64, bound: i64) -> Result<SamplePoint> {
        if bound < 1 {
            return Err(Error::InvalidArgument(
                "coordinate bound must be at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rejected = 0;
        while rejected < MAX_SAMPLE_ATTEMPTS {
            let x = Vector::new(
                (0..self.ambient_dim)
                    .map(|_| {
                        Scalar::from_ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
                    })
                    .collect(),
            );
            if self.passes(&x)? {
                return Ok(SamplePoint {
                    point: x,
                    certificate: self.certificate(),
                    rejected,
                });
            }
            rejected += 1;
        }
        Err(Error::SamplingExhausted(rejected))
    }
}

/// Exact genericity of `x` for the system `rs` (full certificate only).
pub fn is_generic(rs: &RootSystem, x: &Vector) -> Result<bool> {
    GenericityContext::new(rs)?.is_generic(x)
}

/// One generic rational point, its certificate, and the rejection count.
pub fn random_generic_point(rs: &RootSystem, seed: u64, bound: i64) -> Result<SamplePoint> {
    GenericityContext::new(rs)?.sample(seed, bound)
}

/// |{g ∈ W : g⁻¹x lies in the open simple cone}|, by exact enumeration.
pub fn count_containing_cones(
    rs: &RootSystem,
    w: &ReflectionGroup,
    x: &Vector,
) -> Result<u64> {
    let n = rs.ambient_dim();
    if rs.rank() < n {
        // The simple cone has empty interior; no translate contains x.
        return Ok(0);
    }
    let basis_inv = rs
        .simple()
        .transpose()
        .inverse()?
        .expect("full-rank base is invertible");
    let mut count = 0;
    for i in 0..w.order() {
        let moved = w.inverse(i).mul_vec(x)?;
        let coeffs = basis_inv.mul_vec(&moved)?;
        if coeffs.iter().all(Scalar::is_positive) {
            count += 1;
        }
    }
    Ok(count)
}

/// |{g ∈ W : (g ωᵢ, x) > 0 for every fundamental coweight ωᵢ}| — the dual
/// description of the same set, enumerated independently.
pub fn bounded_orbit_count(
    rs: &RootSystem,
    w: &ReflectionGroup,
    x: &Vector,
) -> Result<u64> {
    let coweights = rs.fundamental_coweights()?;
    let v = rs.form().mul_vec(x)?;
    let mut count = 0;
    for g in w.elements() {
        // (gωᵢ, x) = ωᵢ · gᵀ(Gx); one transpose-vector product per element.
        let gt_v = g.transpose().mul_vec(&v)?;
        let mut inside = true;
        for omega in &coweights {
            if !omega.dot(&gt_v)?.is_positive() {
                inside = false;
                break;
            }
        }
        if inside {
            count += 1;
        }
    }
    Ok(count)
}

/// Binomial coefficient, saturating at u64::MAX.
fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic k-subsets of {0, …, n−1}.
struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let item = self.current.clone();
        let k = self.current.len();
        // Advance to the next lexicographic k-subset.
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - (k - i) {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            self.done = true;
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Family;
    use crate::group::generate_group;

    fn setup(f: Family) -> (RootSystem, ReflectionGroup) {
        let rs = RootSystem::of_family(f).unwrap();
        let w = generate_group(&rs).unwrap();
        (rs, w)
    }

    #[test]
    fn combinations_enumerate_completely() {
        let all: Vec<Vec<usize>> = Combinations::new(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[9], vec![3, 4]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(60, 3), 34_220);
    }

    #[test]
    fn genericity_rejects_roots_and_accepts_interior_points() {
        let rs = RootSystem::of_family(Family::A(2)).unwrap();
        let alpha = Vector::from_ints(&[1, 0]);
        assert!(!is_generic(&rs, &alpha).unwrap());
        let coweights = rs.fundamental_coweights().unwrap();
        let x = coweights[0].add(&coweights[1].scale(&Scalar::from_int(2)));
        assert!(is_generic(&rs, &x).unwrap());
        // A point on a reflecting line but off the base spans.
        let ctx = GenericityContext::new(&rs).unwrap();
        match ctx.certificate() {
            Certificate::Full { hyperplanes } => assert_eq!(hyperplanes, 3),
            Certificate::ReflectionsOnly => panic!("A2 is well within budget"),
        }
    }

    #[test]
    fn budget_overflow_degrades_to_the_weak_certificate() {
        let rs = RootSystem::of_family(Family::B(3)).unwrap();
        let ctx = GenericityContext::with_budget(&rs, 5).unwrap();
        assert_eq!(ctx.certificate(), Certificate::ReflectionsOnly);
        let x = Vector::from_ints(&[3, 2, 1]);
        assert!(matches!(
            ctx.is_generic(&x),
            Err(Error::CertificateBudget { .. })
        ));
        // Sampling still works, flagged with the weak certificate.
        let s = ctx.sample(11, 50).unwrap();
        assert_eq!(s.certificate, Certificate::ReflectionsOnly);
    }

    #[test]
    fn sampling_is_deterministic_and_rarely_rejects() {
        let rs = RootSystem::of_family(Family::A(2)).unwrap();
        let ctx = GenericityContext::new(&rs).unwrap();
        let a = ctx.sample(42, 100).unwrap();
        let b = ctx.sample(42, 100).unwrap();
        assert_eq!(a.point, b.point);
        assert_eq!(a.rejected, b.rejected);
        let mut rejected_total = 0;
        for seed in 0..1000 {
            let s = ctx.sample(seed, 100).unwrap();
            assert!(ctx.is_generic(&s.point).unwrap());
            rejected_total += s.rejected;
        }
        // Fraction rejected out of all draws stays small.
        assert!(
            rejected_total < 250,
            "rejected {rejected_total} of {} draws",
            1000 + rejected_total
        );
    }

    #[test]
    fn the_two_counting_oracles_agree_and_hit_the_degree_product() {
        let cases = [
            (Family::A(1), 1),
            (Family::A(2), 2),
            (Family::B(2), 3),
            (Family::G2, 5),
            (Family::A(3), 6),
            (Family::B(3), 15),
        ];
        for (f, expected) in cases {
            let (rs, w) = setup(f);
            let ctx = GenericityContext::new(&rs).unwrap();
            for seed in 0..5 {
                let s = ctx.sample(seed, 40).unwrap();
                let cones = count_containing_cones(&rs, &w, &s.point).unwrap();
                let orbit = bounded_orbit_count(&rs, &w, &s.point).unwrap();
                assert_eq!(cones, expected, "{f}: cone count");
                assert_eq!(orbit, cones, "{f}: oracle mismatch");
            }
        }
    }

    #[test]
    fn counts_survive_base_rescaling() {
        let (rs, w) = setup(Family::B(2));
        let scaled = rs
            .rescaled_base(&[Scalar::from_ratio(3, 2), Scalar::from_int(5)])
            .unwrap();
        let w_scaled = generate_group(&scaled).unwrap();
        let ctx = GenericityContext::new(&rs).unwrap();
        for seed in 0..10 {
            let s = ctx.sample(seed, 30).unwrap();
            assert_eq!(
                count_containing_cones(&rs, &w, &s.point).unwrap(),
                count_containing_cones(&scaled, &w_scaled, &s.point).unwrap()
            );
        }
    }

    #[test]
    fn each_orbit_meets_the_open_fundamental_chamber_once() {
        for f in [Family::A(2), Family::B(2), Family::G2] {
            let (rs, w) = setup(f);
            let ctx = GenericityContext::new(&rs).unwrap();
            for seed in 0..10 {
                let s = ctx.sample(seed, 25).unwrap();
                let mut hits = 0;
                for i in 0..w.order() {
                    let moved = w.inverse(i).mul_vec(&s.point).unwrap();
                    if rs.in_fundamental_chamber(&moved).unwrap() {
                        hits += 1;
                    }
                }
                assert_eq!(hits, 1, "{f}: seed {seed}");
            }
        }
    }

    #[test]
    fn slow_path_and_fast_path_count_identically() {
        let (rs, w) = setup(Family::G2);
        let ctx = GenericityContext::new(&rs).unwrap();
        let s = ctx.sample(7, 20).unwrap();
        let fast = count_containing_cones(&rs, &w, &s.point).unwrap();
        let mut slow = 0;
        for i in 0..w.order() {
            let moved = w.inverse(i).mul_vec(&s.point).unwrap();
            if rs.in_open_cone(&moved).unwrap() {
                slow += 1;
            }
        }
        assert_eq!(fast, slow);
    }
}
