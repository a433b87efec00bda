//! The affine deletion identity, its alcove interpretation, formal deletion
//! sums for arbitrary diagrams, and the exhaustive search over single-vertex
//! extensions of H3 and H4.
//!
//! For a crystallographic family the extended diagram gains one node; delete
//! each node in turn, classify what remains, and add up ∏ⱼ (dⱼ−1)/dⱼ over
//! the deletion's degree multiset. The sum is exactly 1 — and the search
//! shows no admissible extension of H3 or H4 reproduces that.

use crate::catalog::{
    build_diagram, degrees_of_decomposition, extended_diagram, DegreeMultiset, Family,
};
use crate::diagram::{classify_finite, CoxeterDiagram, TypeDecomposition};
use crate::error::{Error, Result};
use crate::generic::GenericityContext;
use crate::linalg::Vector;
use crate::roots::RootSystem;
use crate::scalar::{serialize_ratio, Rat};
use crate::volume::cone_volume_exact;
use num_traits::Zero;
use serde::Serialize;

/// One node deletion: what is left, its degrees, and its volume term.
#[derive(Clone, Debug, Serialize)]
pub struct DeletionRecord {
    pub node: usize,
    #[serde(rename = "type")]
    pub decomposition: TypeDecomposition,
    pub degrees: DegreeMultiset,
    #[serde(serialize_with = "serialize_ratio")]
    pub term: Rat,
}

/// The full deletion identity for one crystallographic family.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    #[serde(rename = "type")]
    pub family: Family,
    pub extended: CoxeterDiagram,
    pub deletions: Vec<DeletionRecord>,
    #[serde(serialize_with = "serialize_ratio")]
    pub total: Rat,
}

/// The formal deletion sum of an arbitrary diagram, when defined.
#[derive(Clone, Debug)]
pub enum FormalSum {
    Admissible {
        total: Rat,
        deletions: Vec<DeletionRecord>,
    },
    /// Deleting `node` leaves a diagram that is not of finite type, so the
    /// sum has an undefined term.
    Inadmissible { node: usize },
}

impl FormalSum {
    pub fn is_admissible(&self) -> bool {
        matches!(self, FormalSum::Admissible { .. })
    }

    pub fn total(&self) -> Option<&Rat> {
        match self {
            FormalSum::Admissible { total, .. } => Some(total),
            FormalSum::Inadmissible { .. } => None,
        }
    }
}

/// Σᵢ ∏ⱼ (dⱼ^(i)−1)/dⱼ^(i) over single-node deletions of `d`, where d^(i)
/// is the degree multiset of the classified deletion. Defined exactly when
/// every deletion is of finite type.
pub fn formal_identity_sum(d: &CoxeterDiagram) -> FormalSum {
    let mut deletions = Vec::with_capacity(d.size());
    let mut total = Rat::zero();
    for node in 0..d.size() {
        let sub = d.delete_vertex(node);
        let decomposition = classify_finite(&sub);
        let degrees = match degrees_of_decomposition(&decomposition) {
            Ok(degs) => degs,
            Err(_) => return FormalSum::Inadmissible { node },
        };
        let term = cone_volume_exact(&degrees);
        total += &term;
        deletions.push(DeletionRecord {
            node,
            decomposition,
            degrees,
            term,
        });
    }
    FormalSum::Admissible { total, deletions }
}

/// Build the extended diagram of a crystallographic family, delete each
/// node in turn, and sum the volume terms. The result's `total` is checked
/// against 1 by the tests, per type.
pub fn deletion_identity(family: Family) -> Result<IdentityReport> {
    let ext = extended_diagram(family)?;
    match formal_identity_sum(ext.full()) {
        FormalSum::Admissible { total, deletions } => Ok(IdentityReport {
            family,
            extended: ext.full().clone(),
            deletions,
            total,
        }),
        FormalSum::Inadmissible { node } => Err(Error::InvalidDiagram(format!(
            "extended diagram of {family} has a non-finite deletion at node {node}"
        ))),
    }
}

/// One trial of the alcove partition check.
#[derive(Clone, Debug, Serialize)]
pub struct AlcoveSample {
    pub point: Vec<String>,
    /// The unique i with −x inside the open cone of Δ̃ − {αᵢ}.
    pub vertex: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlcoveReport {
    #[serde(rename = "type")]
    pub family: Family,
    pub trials: u64,
    pub seed: u64,
    pub samples: Vec<AlcoveSample>,
}

/// Coordinate bound for the alcove sampler.
const ALCOVE_SAMPLE_BOUND: i64 = 100;

/// The geometric face of the deletion identity: with α₀ = −(highest root),
/// the cones spanned by the n-subsets of Δ̃ = {α₀, α₁, …, αₙ} tile the
/// space (after negation they are the vertex normal cones of the
/// fundamental alcove). Each generic point must land in exactly one.
pub fn alcove_partition_check(family: Family, trials: u64, seed: u64) -> Result<AlcoveReport> {
    let ext = extended_diagram(family)?; // rejects non-crystallographic input
    let n = family.rank();
    if n > 4 {
        return Err(Error::InvalidArgument(format!(
            "the alcove check enumerates rank \u{2264} 4 systems; {family} has rank {n}"
        )));
    }
    let _ = ext;
    let rs = RootSystem::of_family(family)?;
    let theta = rs.highest_root()?;
    let mut tilde: Vec<Vector> = vec![theta.neg()];
    for i in 0..n {
        tilde.push(rs.simple().row(i));
    }
    let ctx = GenericityContext::new(&rs)?;
    let mut samples = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let x = ctx.sample(seed.wrapping_add(t), ALCOVE_SAMPLE_BOUND)?.point;
        let minus_x = x.neg();
        let mut hits = Vec::new();
        for skip in 0..=n {
            let rows: Vec<Vector> = (0..=n)
                .filter(|&j| j != skip)
                .map(|j| tilde[j].clone())
                .collect();
            let coeffs = crate::linalg::Matrix::from_rows(rows)
                .transpose()
                .solve_any(&minus_x)?;
            if let Some(c) = coeffs {
                if c.iter().all(crate::scalar::Scalar::is_positive) {
                    hits.push(skip);
                }
            }
        }
        if hits.len() != 1 {
            return Err(Error::PartitionViolation {
                got: hits.len() as u64,
                witness: format!("{x:?}"),
            });
        }
        samples.push(AlcoveSample {
            point: x.iter().map(|s| s.to_string()).collect(),
            vertex: hits[0],
        });
    }
    Ok(AlcoveReport {
        family,
        trials,
        seed,
        samples,
    })
}

/// One candidate from the extension search: a new vertex bonded to the
/// base diagram by the given labels (label 2 = no edge).
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionCandidate {
    pub labels: Vec<u32>,
    pub diagram: CoxeterDiagram,
    pub admissible: bool,
    pub finite_total: bool,
    #[serde(rename = "per_deletion")]
    pub deletions: Vec<DeletionRecord>,
    #[serde(serialize_with = "serialize_ratio")]
    pub sum: Rat,
    /// The candidate attaches by a single label-3 bond at an end of the
    /// base path, so the whole diagram is again a path.
    pub single_label3_path: bool,
}

/// Largest bond label the search needs to consider: a label ≥ 6 next to
/// any base bond yields a non-finite three-node deletion, so such vectors
/// are never admissible. Verified independently by a wider brute force in
/// the tests.
pub const EXTENSION_LABEL_BOUND: u32 = 5;

/// All single-vertex extensions of H3 or H4 whose every single-node
/// deletion is of finite type, in lexicographic label order. With
/// `require_nonfinite_total`, extensions that are themselves of finite
/// type are dropped as well.
pub fn search_h_extensions(
    base: Family,
    require_nonfinite_total: bool,
) -> Result<Vec<ExtensionCandidate>> {
    search_h_extensions_with_bound(base, require_nonfinite_total, EXTENSION_LABEL_BOUND)
}

/// The same search over labels {2, …, max_label}.
pub fn search_h_extensions_with_bound(
    base: Family,
    require_nonfinite_total: bool,
    max_label: u32,
) -> Result<Vec<ExtensionCandidate>> {
    if !matches!(base, Family::H3 | Family::H4) {
        return Err(Error::InvalidArgument(format!(
            "the extension search is defined for H3 and H4, not {base}"
        )));
    }
    if max_label < 2 {
        return Err(Error::InvalidArgument(
            "the label bound must be at least 2".into(),
        ));
    }
    let base_diagram = build_diagram(base)?;
    let n = base_diagram.size();
    let mut out = Vec::new();
    for labels in label_vectors(n, max_label) {
        let full = extend_by_vertex(&base_diagram, &labels);
        let (sum, deletions) = match formal_identity_sum(&full) {
            FormalSum::Admissible { total, deletions } => (total, deletions),
            FormalSum::Inadmissible { .. } => continue,
        };
        let finite_total = classify_finite(&full).is_finite();
        if require_nonfinite_total && finite_total {
            continue;
        }
        let bonds: Vec<(usize, u32)> = labels
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 2)
            .map(|(i, &m)| (i, m))
            .collect();
        let single_label3_path =
            bonds.len() == 1 && bonds[0].1 == 3 && (bonds[0].0 == 0 || bonds[0].0 == n - 1);
        out.push(ExtensionCandidate {
            labels,
            diagram: full,
            admissible: true,
            finite_total,
            deletions,
            sum,
            single_label3_path,
        });
    }
    Ok(out)
}

/// Attach one new vertex (index `base.size()`) with the given bond labels.
pub fn extend_by_vertex(base: &CoxeterDiagram, labels: &[u32]) -> CoxeterDiagram {
    let n = base.size();
    assert_eq!(labels.len(), n, "one bond label per base node");
    let mut full = CoxeterDiagram::new(n + 1);
    for (i, j, m) in base.edges() {
        full.set_label(i, j, m);
    }
    for (i, &m) in labels.iter().enumerate() {
        full.set_label(i, n, m);
    }
    full
}

/// All vectors in {2, …, max}^n, lexicographically.
fn label_vectors(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![2u32; n];
    loop {
        out.push(current.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < max {
                current[i] += 1;
                for v in current.iter_mut().skip(i + 1) {
                    *v = 2;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::standard_crystallographic_families;
    use crate::scalar::rat;
    use num_traits::One;

    #[test]
    fn the_g2_identity_has_the_three_classical_terms() {
        let report = deletion_identity(Family::G2).unwrap();
        let terms: Vec<Rat> = report.deletions.iter().map(|d| d.term.clone()).collect();
        assert_eq!(terms, vec![rat(5, 12), rat(1, 4), rat(1, 3)]);
        assert_eq!(report.total, Rat::one());
        let names: Vec<String> = report
            .deletions
            .iter()
            .map(|d| d.decomposition.to_string())
            .collect();
        assert_eq!(names, vec!["G2", "A1 x A1", "A2"]);
    }

    #[test]
    fn the_a2_identity_is_three_equal_thirds() {
        let report = deletion_identity(Family::A(2)).unwrap();
        assert_eq!(report.deletions.len(), 3);
        for d in &report.deletions {
            assert_eq!(d.term, rat(1, 3));
            assert_eq!(d.decomposition.to_string(), "A2");
        }
        assert_eq!(report.total, Rat::one());
    }

    #[test]
    fn every_standard_crystallographic_family_sums_to_one() {
        for family in standard_crystallographic_families() {
            let report = deletion_identity(family).unwrap();
            assert_eq!(report.total, Rat::one(), "{family}");
            assert_eq!(report.deletions.len(), family.rank() + 1, "{family}");
        }
    }

    #[test]
    fn identity_terms_are_the_deleted_cone_volumes() {
        for family in [
            Family::A(2),
            Family::A(3),
            Family::B(2),
            Family::B(3),
            Family::C(3),
            Family::G2,
        ] {
            let ext = extended_diagram(family).unwrap();
            let report = deletion_identity(family).unwrap();
            for d in &report.deletions {
                let deleted = ext.delete_node(d.node).unwrap();
                let degrees = crate::catalog::degrees(&deleted).unwrap();
                assert_eq!(d.term, cone_volume_exact(&degrees), "{family} node {}", d.node);
            }
        }
    }

    #[test]
    fn non_crystallographic_families_are_rejected() {
        assert!(matches!(
            deletion_identity(Family::H3),
            Err(Error::NoExtendedDiagram(_, _))
        ));
        assert!(matches!(
            deletion_identity(Family::I2(5)),
            Err(Error::NoExtendedDiagram(_, _))
        ));
    }

    #[test]
    fn formal_sums_reproduce_the_hand_computed_values() {
        // A 3-cycle of plain bonds: every deletion is A2, total 1.
        let mut cycle = CoxeterDiagram::new(3);
        cycle.set_label(0, 1, 3);
        cycle.set_label(1, 2, 3);
        cycle.set_label(0, 2, 3);
        match formal_identity_sum(&cycle) {
            FormalSum::Admissible { total, .. } => assert_eq!(total, Rat::one()),
            FormalSum::Inadmissible { .. } => panic!("the 3-cycle is admissible"),
        }

        let h3 = build_diagram(Family::H3).unwrap();
        // Attaching a plain bond at the far end rebuilds the H4 diagram.
        let h4_shape = extend_by_vertex(&h3, &[2, 2, 3]);
        assert_eq!(classify_finite(&h4_shape).to_string(), "H4");
        match formal_identity_sum(&h4_shape) {
            FormalSum::Admissible { total, .. } => assert_eq!(total, rat(119, 120)),
            FormalSum::Inadmissible { .. } => panic!("H4 deletions are finite"),
        }

        // A disconnected extension: H3 × A1.
        match formal_identity_sum(&extend_by_vertex(&h3, &[2, 2, 2])) {
            FormalSum::Admissible { total, .. } => assert_eq!(total, rat(13, 15)),
            FormalSum::Inadmissible { .. } => panic!("H3 x A1 deletions are finite"),
        }

        // The 5—3—5 path.
        match formal_identity_sum(&extend_by_vertex(&h3, &[2, 2, 5])) {
            FormalSum::Admissible { total, .. } => assert_eq!(total, rat(23, 20)),
            FormalSum::Inadmissible { .. } => panic!("the 5-3-5 path is admissible"),
        }

        // A bond of 6 next to the base path makes a non-finite deletion.
        let bad = extend_by_vertex(&build_diagram(Family::A(3)).unwrap(), &[6, 2, 2]);
        assert!(matches!(
            formal_identity_sum(&bad),
            FormalSum::Inadmissible { .. }
        ));
    }

    #[test]
    fn h3_search_matches_the_hand_audit() {
        let strict = search_h_extensions(Family::H3, true).unwrap();
        assert!(!strict.is_empty());
        for c in &strict {
            assert!(c.admissible);
            assert!(!c.finite_total);
            assert_ne!(c.sum, Rat::one(), "labels {:?}", c.labels);
        }
        // Lexicographic order and mode filtering.
        let lenient = search_h_extensions(Family::H3, false).unwrap();
        assert!(lenient.len() > strict.len());
        for c in &lenient {
            assert_ne!(c.sum, Rat::one(), "labels {:?}", c.labels);
        }
        let find = |list: &[ExtensionCandidate], labels: &[u32]| {
            list.iter().find(|c| c.labels == labels).cloned()
        };
        // The H4 rebuild is admissible but of finite type.
        assert!(find(&strict, &[2, 2, 3]).is_none());
        let h4_rebuild = find(&lenient, &[2, 2, 3]).unwrap();
        assert!(h4_rebuild.finite_total);
        assert_eq!(h4_rebuild.sum, rat(119, 120));
        assert!(h4_rebuild.single_label3_path);
        // The disconnected extension is finite type too.
        assert!(find(&strict, &[2, 2, 2]).is_none());
        assert_eq!(find(&lenient, &[2, 2, 2]).unwrap().sum, rat(13, 15));
        // A plain bond at the 5-end keeps a path shape and is not finite.
        let at_five_end = find(&strict, &[3, 2, 2]).unwrap();
        assert!(at_five_end.single_label3_path);
        // A bond in the middle forks the diagram.
        if let Some(mid) = find(&lenient, &[2, 3, 2]) {
            assert!(!mid.single_label3_path);
        }
    }

    #[test]
    fn h4_search_is_nonempty_and_never_sums_to_one() {
        for mode in [true, false] {
            let list = search_h_extensions(Family::H4, mode).unwrap();
            assert!(!list.is_empty(), "mode {mode}");
            for c in &list {
                assert_ne!(c.sum, Rat::one(), "labels {:?}", c.labels);
            }
        }
    }

    /// An independent finite-type recognizer: try to match each connected
    /// component against every classical diagram of its size, over all node
    /// permutations.
    fn template_finite(d: &CoxeterDiagram) -> bool {
        fn permutations(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in permutations(k - 1) {
                for pos in 0..k {
                    let mut p = rest.clone();
                    p.insert(pos, k - 1);
                    out.push(p);
                }
            }
            out
        }
        fn connected_templates(k: usize) -> Vec<CoxeterDiagram> {
            let fams: Vec<Family> = match k {
                1 => vec![Family::A(1)],
                2 => vec![], // handled by the label rule below
                3 => vec![Family::A(3), Family::B(3), Family::H3],
                4 => vec![Family::A(4), Family::B(4), Family::D(4), Family::F4, Family::H4],
                5 => vec![Family::A(5), Family::B(5), Family::D(5)],
                _ => vec![],
            };
            fams.into_iter()
                .map(|f| build_diagram(f).unwrap())
                .collect()
        }
        for comp in d.components() {
            let sub = d.induced(&comp);
            let k = sub.size();
            if k == 2 {
                continue; // any single bond is a finite dihedral group
            }
            let mut matched = k == 1;
            'templates: for template in connected_templates(k) {
                for perm in permutations(k) {
                    if sub.permuted(&perm) == template {
                        matched = true;
                        break 'templates;
                    }
                }
            }
            if !matched {
                return false;
            }
        }
        true
    }

    #[test]
    fn independent_brute_force_finds_the_same_h3_candidates() {
        // Wider label bound, independently written admissibility test.
        let base = build_diagram(Family::H3).unwrap();
        let mut brute: Vec<(Vec<u32>, bool)> = Vec::new();
        for labels in label_vectors(3, 7) {
            let full = extend_by_vertex(&base, &labels);
            let admissible = (0..full.size()).all(|v| template_finite(&full.delete_vertex(v)));
            if admissible {
                brute.push((labels, template_finite(&full)));
            }
        }
        let lenient = search_h_extensions(Family::H3, false).unwrap();
        assert_eq!(
            brute.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>(),
            lenient.iter().map(|c| c.labels.clone()).collect::<Vec<_>>()
        );
        for ((labels, brute_finite), candidate) in brute.iter().zip(lenient.iter()) {
            assert_eq!(labels, &candidate.labels);
            assert_eq!(*brute_finite, candidate.finite_total, "labels {labels:?}");
        }
    }

    #[test]
    fn alcove_partition_holds_for_small_crystallographic_types() {
        for family in [Family::A(2), Family::B(2), Family::G2, Family::A(3)] {
            let report = alcove_partition_check(family, 25, 17).unwrap();
            assert_eq!(report.samples.len(), 25, "{family}");
        }
    }

    #[test]
    fn alcove_check_rejects_unsupported_input() {
        assert!(matches!(
            alcove_partition_check(Family::H3, 5, 1),
            Err(Error::NoExtendedDiagram(_, _))
        ));
        assert!(matches!(
            alcove_partition_check(Family::A(5), 5, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn alcove_vertices_cover_every_index_over_many_trials() {
        // Each normal cone has positive volume, so 60 trials of A2 should
        // hit all three vertices.
        let report = alcove_partition_check(Family::A(2), 60, 23).unwrap();
        let mut seen = [false; 3];
        for s in &report.samples {
            seen[s.vertex] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }
}
