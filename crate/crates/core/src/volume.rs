//! The cone-volume formula, the chamber volume, seeded Monte Carlo
//! estimation of both solid angles, and the exact counting check.
//!
//! Solid angles are measured in the geometry of the realization's bilinear
//! form, so the Monte Carlo sampler draws directions that are isotropic for
//! that form (not for the coordinate dot product).

use crate::catalog::DegreeMultiset;
use crate::diagram::classify_finite;
use crate::error::{Error, Result};
use crate::generic::GenericityContext;
use crate::group::ReflectionGroup;
use crate::roots::RootSystem;
use crate::scalar::{rat, ratio_string, serialize_ratio, Rat};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Samples per deterministic chunk; chunks are independent of the thread
/// count, so estimates are byte-identical however the work is split.
const MC_CHUNK: u64 = 1 << 16;

/// Default rejection band around membership boundaries.
pub const DEFAULT_MC_TOLERANCE: f64 = 1e-9;

/// Coordinate bound for the exact sampler used by the counting check.
const COUNT_SAMPLE_BOUND: i64 = 100;

/// ∏ᵢ (dᵢ − 1)/dᵢ. Zero as soon as some degree is 1.
pub fn cone_volume_exact(degrees: &DegreeMultiset) -> Rat {
    let mut v = Rat::one();
    for &d in degrees.values() {
        v *= rat(d as i64 - 1, d as i64);
    }
    v
}

/// 1/∏ᵢ dᵢ.
pub fn chamber_volume_exact(degrees: &DegreeMultiset) -> Rat {
    let mut v = Rat::one();
    for &d in degrees.values() {
        v *= rat(1, d as i64);
    }
    v
}

/// Options for the Monte Carlo estimators.
#[derive(Clone, Copy, Debug)]
pub struct McOptions {
    /// Draws with any membership value in (−tolerance, tolerance) are
    /// discarded and redrawn.
    pub tolerance: f64,
    /// Worker threads; the result does not depend on this.
    pub threads: usize,
}

impl Default for McOptions {
    fn default() -> McOptions {
        McOptions {
            tolerance: DEFAULT_MC_TOLERANCE,
            threads: 1,
        }
    }
}

/// A finished Monte Carlo run next to the exact value it estimates.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeReport {
    #[serde(rename = "type")]
    pub type_name: String,
    pub degrees: Vec<u64>,
    #[serde(serialize_with = "serialize_ratio")]
    pub exact: Rat,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub discards: u64,
}

impl VolumeReport {
    /// |estimate − exact| in units of the standard error (∞ if stderr = 0
    /// and the difference is nonzero).
    pub fn deviation_in_stderr(&self) -> f64 {
        let exact = self.exact.to_f64().unwrap_or(f64::NAN);
        let diff = (self.estimate - exact).abs();
        if self.stderr == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.stderr
        }
    }

    pub fn exact_string(&self) -> String {
        ratio_string(&self.exact)
    }
}

fn type_name_of(rs: &RootSystem) -> String {
    match rs.family() {
        Some(f) => f.to_string(),
        None => classify_finite(rs.diagram()).to_string(),
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite
/// matrix given as float rows.
fn cholesky(g: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = g[i][j];
            for (lik, ljk) in l[i].iter().zip(&l[j]).take(j) {
                sum -= lik * ljk;
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::InvalidArgument(
                        "form is not positive definite".into(),
                    ));
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Which solid angle is being estimated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum McRegion {
    /// The open cone of positive combinations of the simple roots.
    Cone,
    /// The open chamber where every (x, αᵢ) is positive.
    Chamber,
}

/// Per-sample linear membership data as float rows: the region is
/// {x : row·x > 0 for every row}.
fn membership_rows(rs: &RootSystem, region: McRegion) -> Result<Vec<Vec<f64>>> {
    match region {
        McRegion::Cone => {
            let inv = rs
                .simple()
                .transpose()
                .inverse()?
                .ok_or_else(|| {
                    Error::InvalidArgument(
                        "Monte Carlo volume needs a base spanning the ambient space".into(),
                    )
                })?;
            Ok(inv.to_f64_rows())
        }
        McRegion::Chamber => Ok(rs.simple().mul(rs.form())?.to_f64_rows()),
    }
}

fn chunk_seed(seed: u64, chunk: u64) -> u64 {
    seed ^ (chunk + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Hits and discards for one deterministic chunk.
fn run_chunk(
    rows: &[Vec<f64>],
    transform: &[Vec<f64>],
    n_dims: usize,
    samples: u64,
    seed: u64,
    tolerance: f64,
) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut discards = 0u64;
    let mut z = vec![0.0f64; n_dims + 1];
    let mut x = vec![0.0f64; n_dims];
    let mut accepted = 0u64;
    while accepted < samples {
        // Standard normal draws via Box–Muller, a full pair at a time so
        // every sample consumes the same number of uniforms.
        let mut i = 0;
        while i < n_dims {
            let u1: f64 = 1.0 - rng.gen::<f64>();
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
            z[i] = r * c;
            z[i + 1] = r * s;
            i += 2;
        }
        // Isotropic direction for the form G = LLᵀ: solve Lᵀx = z.
        for i in (0..n_dims).rev() {
            let mut v = z[i];
            for j in i + 1..n_dims {
                v -= transform[j][i] * x[j];
            }
            x[i] = v / transform[i][i];
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut inside = true;
        let mut boundary = norm == 0.0;
        for row in rows {
            let mut val = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                val += a * b;
            }
            val /= norm;
            if val.abs() <= tolerance {
                boundary = true;
                break;
            }
            if val < 0.0 {
                inside = false;
                break;
            }
        }
        if boundary {
            discards += 1;
            continue;
        }
        accepted += 1;
        if inside {
            hits += 1;
        }
    }
    (hits, discards)
}

fn monte_carlo(
    rs: &RootSystem,
    region: McRegion,
    samples: u64,
    seed: u64,
    options: &McOptions,
) -> Result<VolumeReport> {
    if rs.rank() != rs.ambient_dim() {
        return Err(Error::InvalidArgument(
            "Monte Carlo volume needs a base spanning the ambient space".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let n = rs.ambient_dim();
    let rows = membership_rows(rs, region)?;
    let transform = cholesky(&rs.form().to_f64_rows())?;
    let chunks: Vec<(u64, u64)> = (0..samples)
        .step_by(MC_CHUNK as usize)
        .enumerate()
        .map(|(c, start)| (c as u64, (samples - start).min(MC_CHUNK)))
        .collect();
    let threads = options.threads.max(1);
    let mut hits = 0u64;
    let mut discards = 0u64;
    if threads == 1 || chunks.len() == 1 {
        for (c, len) in &chunks {
            let (h, d) = run_chunk(
                &rows,
                &transform,
                n,
                *len,
                chunk_seed(seed, *c),
                options.tolerance,
            );
            hits += h;
            discards += d;
        }
    } else {
        let totals = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for worker in 0..threads {
                let chunks = &chunks;
                let rows = &rows;
                let transform = &transform;
                handles.push(scope.spawn(move || {
                    let mut h_total = 0u64;
                    let mut d_total = 0u64;
                    let mut at = worker;
                    while at < chunks.len() {
                        let (c, len) = chunks[at];
                        let (h, d) = run_chunk(
                            rows,
                            transform,
                            n,
                            len,
                            chunk_seed(seed, c),
                            options.tolerance,
                        );
                        h_total += h;
                        d_total += d;
                        at += threads;
                    }
                    (h_total, d_total)
                }));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling worker panicked"))
                .fold((0u64, 0u64), |acc, t| (acc.0 + t.0, acc.1 + t.1))
        });
        hits = totals.0;
        discards = totals.1;
    }
    let p = hits as f64 / samples as f64;
    let stderr = (p * (1.0 - p) / samples as f64).sqrt();
    let degrees = rs.degrees()?;
    let exact = match region {
        McRegion::Cone => cone_volume_exact(&degrees),
        McRegion::Chamber => chamber_volume_exact(&degrees),
    };
    Ok(VolumeReport {
        type_name: type_name_of(rs),
        degrees: degrees.values().to_vec(),
        exact,
        estimate: p,
        stderr,
        samples,
        seed,
        discards,
    })
}

/// Estimate the solid angle of the open simple cone by seeded sampling.
pub fn monte_carlo_cone_volume(rs: &RootSystem, samples: u64, seed: u64) -> Result<VolumeReport> {
    monte_carlo(rs, McRegion::Cone, samples, seed, &McOptions::default())
}

pub fn monte_carlo_cone_volume_with(
    rs: &RootSystem,
    samples: u64,
    seed: u64,
    options: &McOptions,
) -> Result<VolumeReport> {
    monte_carlo(rs, McRegion::Cone, samples, seed, options)
}

/// Estimate the solid angle of the open fundamental chamber.
pub fn monte_carlo_chamber_volume(
    rs: &RootSystem,
    samples: u64,
    seed: u64,
) -> Result<VolumeReport> {
    monte_carlo(rs, McRegion::Chamber, samples, seed, &McOptions::default())
}

pub fn monte_carlo_chamber_volume_with(
    rs: &RootSystem,
    samples: u64,
    seed: u64,
    options: &McOptions,
) -> Result<VolumeReport> {
    monte_carlo(rs, McRegion::Chamber, samples, seed, options)
}

/// One exact counting trial.
#[derive(Clone, Debug, Serialize)]
pub struct CountSample {
    /// Sample coordinates, printed exactly.
    pub point: Vec<String>,
    pub count: u64,
}

/// The record of a counting-theorem run: every generic sample must see
/// exactly ∏(dᵢ−1) translates of the open cone.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    #[serde(rename = "type")]
    pub type_name: String,
    pub expected: u64,
    pub trials: u64,
    pub seed: u64,
    pub samples: Vec<CountSample>,
}

/// Run `trials` independent generic points through the exact cone count
/// and fail loudly on any deviation from ∏(dᵢ−1).
pub fn verify_count_theorem(
    rs: &RootSystem,
    w: &ReflectionGroup,
    trials: u64,
    seed: u64,
) -> Result<CountReport> {
    let degrees = rs.degrees()?;
    let expected: u64 = degrees.exponents().iter().product();
    let ctx = GenericityContext::new(rs)?;
    let mut samples = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let point = ctx
            .sample(seed.wrapping_add(t), COUNT_SAMPLE_BOUND)?
            .point;
        let count = crate::generic::count_containing_cones(rs, w, &point)?;
        if count != expected {
            return Err(Error::CountMismatch {
                expected,
                got: count,
                witness: format!("{point:?}"),
            });
        }
        samples.push(CountSample {
            point: point.iter().map(|s| s.to_string()).collect(),
            count,
        });
    }
    Ok(CountReport {
        type_name: type_name_of(rs),
        expected,
        trials,
        seed,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Family;
    use crate::group::generate_group;
    use num_traits::Zero;

    fn degrees_of(f: Family) -> DegreeMultiset {
        f.degrees()
    }

    #[test]
    fn exact_volumes_match_the_closed_forms() {
        assert_eq!(cone_volume_exact(&degrees_of(Family::A(2))), rat(1, 3));
        assert_eq!(cone_volume_exact(&degrees_of(Family::B(2))), rat(3, 8));
        assert_eq!(cone_volume_exact(&degrees_of(Family::H3)), rat(3, 8));
        assert_eq!(
            cone_volume_exact(&degrees_of(Family::H4)),
            rat(6061, 14_400)
        );
        for m in 3..=12u32 {
            assert_eq!(
                cone_volume_exact(&degrees_of(Family::I2(m))),
                rat(m as i64 - 1, 2 * m as i64),
                "I2({m})"
            );
        }
        // A degree of 1 (a deleted node leaving a rank-deficient set in its
        // span) zeroes the product.
        assert_eq!(
            cone_volume_exact(&DegreeMultiset::new(vec![1, 4, 6])),
            Rat::zero()
        );
        assert_eq!(chamber_volume_exact(&degrees_of(Family::A(2))), rat(1, 6));
        assert_eq!(chamber_volume_exact(&degrees_of(Family::A(1))), rat(1, 2));
        assert_eq!(chamber_volume_exact(&degrees_of(Family::H3)), rat(1, 120));
    }

    #[test]
    fn group_order_times_cone_volume_is_the_exponent_product() {
        for f in [
            Family::A(2),
            Family::B(4),
            Family::D(4),
            Family::F4,
            Family::H4,
            Family::E(8),
        ] {
            let d = degrees_of(f);
            let lhs = cone_volume_exact(&d) * Rat::from_integer(d.group_order().into());
            let rhs: u64 = d.exponents().iter().product();
            assert_eq!(lhs, Rat::from_integer(rhs.into()), "{f}");
        }
    }

    #[test]
    fn half_space_estimates_one_half() {
        let rs = RootSystem::of_family(Family::A(1)).unwrap();
        let report = monte_carlo_cone_volume(&rs, 20_000, 5).unwrap();
        assert_eq!(report.exact, rat(1, 2));
        assert!(
            report.deviation_in_stderr() < 5.0,
            "estimate {} vs 1/2",
            report.estimate
        );
    }

    #[test]
    fn small_monte_carlo_runs_land_near_the_exact_values() {
        let cases = [
            (Family::A(2), McRegion::Cone),
            (Family::B(2), McRegion::Cone),
            (Family::A(2), McRegion::Chamber),
            (Family::G2, McRegion::Chamber),
        ];
        for (f, region) in cases {
            let rs = RootSystem::of_family(f).unwrap();
            let report =
                monte_carlo(&rs, region, 50_000, 99, &McOptions::default()).unwrap();
            assert!(
                report.deviation_in_stderr() < 5.0,
                "{f} {region:?}: estimate {} exact {} stderr {}",
                report.estimate,
                report.exact_string(),
                report.stderr
            );
        }
    }

    #[test]
    fn estimates_are_deterministic_and_thread_count_invariant() {
        let rs = RootSystem::of_family(Family::B(2)).unwrap();
        let one = monte_carlo_cone_volume_with(
            &rs,
            200_000,
            7,
            &McOptions {
                threads: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let four = monte_carlo_cone_volume_with(
            &rs,
            200_000,
            7,
            &McOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one.estimate.to_bits(), four.estimate.to_bits());
        assert_eq!(one.discards, four.discards);
        let again = monte_carlo_cone_volume(&rs, 200_000, 7).unwrap();
        assert_eq!(one.estimate.to_bits(), again.estimate.to_bits());
    }

    #[test]
    fn doubling_the_samples_moves_the_estimate_within_noise() {
        let rs = RootSystem::of_family(Family::A(2)).unwrap();
        let small = monte_carlo_cone_volume(&rs, 30_000, 13).unwrap();
        let large = monte_carlo_cone_volume(&rs, 60_000, 13).unwrap();
        let combined = (small.stderr * small.stderr + large.stderr * large.stderr).sqrt();
        assert!((small.estimate - large.estimate).abs() <= 6.0 * combined);
    }

    #[test]
    fn tolerance_band_is_invisible_for_generic_draws() {
        let rs = RootSystem::of_family(Family::B(2)).unwrap();
        let loose = monte_carlo_cone_volume_with(
            &rs,
            20_000,
            21,
            &McOptions {
                tolerance: 1e-9,
                threads: 1,
            },
        )
        .unwrap();
        let tight = monte_carlo_cone_volume_with(
            &rs,
            20_000,
            21,
            &McOptions {
                tolerance: 1e-12,
                threads: 1,
            },
        )
        .unwrap();
        assert_eq!(loose.estimate.to_bits(), tight.estimate.to_bits());
        assert_eq!(loose.discards, 0);
        assert_eq!(tight.discards, 0);
    }

    #[test]
    fn rank_deficient_systems_are_rejected() {
        let diagram = crate::diagram::CoxeterDiagram::new(1);
        let simple = crate::linalg::Matrix::from_rows(vec![
            crate::linalg::Vector::from_ints(&[1, 0]),
        ]);
        let realization = crate::catalog::Realization::from_parts(
            diagram,
            simple,
            crate::linalg::Matrix::identity(2),
        )
        .unwrap();
        let rs = RootSystem::generate(realization).unwrap();
        assert!(monte_carlo_cone_volume(&rs, 1000, 1).is_err());
    }

    #[test]
    fn the_counting_theorem_holds_over_seeded_trials() {
        for (f, expected) in [(Family::A(2), 2u64), (Family::B(2), 3), (Family::G2, 5)] {
            let rs = RootSystem::of_family(f).unwrap();
            let w = generate_group(&rs).unwrap();
            let report = verify_count_theorem(&rs, &w, 20, 3).unwrap();
            assert_eq!(report.expected, expected, "{f}");
            assert_eq!(report.samples.len(), 20);
            assert!(report.samples.iter().all(|s| s.count == expected));
        }
    }

    #[test]
    fn reports_serialize_with_exact_fractions() {
        let rs = RootSystem::of_family(Family::A(2)).unwrap();
        let report = monte_carlo_cone_volume(&rs, 4096, 11).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["type"], "A2");
        assert_eq!(json["exact"], "1/3");
        assert_eq!(json["degrees"], serde_json::json!([2, 3]));
        assert_eq!(json["seed"], 11);
    }
}
