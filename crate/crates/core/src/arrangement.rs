//! Central hyperplane arrangements: intersection lattices, Möbius values,
//! Poincaré polynomials, Zaslavsky chamber counts, and generic affine
//! slices.
//!
//! A hyperplane is stored as the linear functional vanishing on it, so the
//! arrangement's combinatorics is plain linear algebra; the bilinear form
//! only enters when a slice hyperplane "normal to x" has to be built.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::roots::RootSystem;
use crate::scalar::Scalar;
use serde::Serialize;
use std::collections::{HashMap, HashSet};

/// Default ceiling on the number of lattice flats.
pub const DEFAULT_LATTICE_BUDGET: usize = 200_000;

/// Atom sets are stored as bitsets in a u128.
pub const MAX_HYPERPLANES: usize = 128;

/// A finite set of hyperplanes through the origin. Hyperplane `i` is
/// `{y : functionals[i] · y = 0}`; for a reflection arrangement the
/// functional of a root α is G·α, which cuts out {y : (y, α) = 0}.
#[derive(Clone, Debug)]
pub struct CentralArrangement {
    functionals: Vec<Vector>,
    form: Matrix,
    dim: usize,
}

impl CentralArrangement {
    /// Build from explicit functionals with the given ambient form.
    /// Functionals are direction-normalized and deduplicated, so parallel
    /// inputs collapse to one hyperplane.
    pub fn with_form(functionals: Vec<Vector>, form: Matrix) -> Result<CentralArrangement> {
        if !form.is_square() {
            return Err(Error::NotSquare {
                rows: form.rows(),
                cols: form.cols(),
            });
        }
        let dim = form.rows();
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "arrangements need a positive ambient dimension".into(),
            ));
        }
        let mut seen: HashSet<Vec<Scalar>> = HashSet::new();
        let mut kept = Vec::new();
        for f in functionals {
            if f.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "functional of length {} in dimension {dim}",
                    f.len()
                )));
            }
            if f.is_zero() {
                return Err(Error::InvalidArgument(
                    "zero functional does not define a hyperplane".into(),
                ));
            }
            let f = f.direction_normalized();
            if seen.insert(f.iter().cloned().collect()) {
                kept.push(f);
            }
        }
        if kept.len() > MAX_HYPERPLANES {
            return Err(Error::InvalidArgument(format!(
                "{} hyperplanes exceed the supported maximum of {MAX_HYPERPLANES}",
                kept.len()
            )));
        }
        Ok(CentralArrangement {
            functionals: kept,
            form,
            dim,
        })
    }

    /// Build from functionals with the standard dot product as the form.
    pub fn from_functionals(functionals: Vec<Vector>, dim: usize) -> Result<CentralArrangement> {
        CentralArrangement::with_form(functionals, Matrix::identity(dim))
    }

    /// `m` pairwise non-parallel lines through the origin of the plane:
    /// the same intersection lattice as a dihedral reflection arrangement,
    /// with rational data for every `m`.
    pub fn dihedral_surrogate(m: u32) -> Result<CentralArrangement> {
        if m < 1 {
            return Err(Error::InvalidArgument(
                "a dihedral surrogate needs at least one line".into(),
            ));
        }
        let functionals = (0..m)
            .map(|k| Vector::from_ints(&[1, k as i64]))
            .collect();
        CentralArrangement::from_functionals(functionals, 2)
    }

    pub fn functionals(&self) -> &[Vector] {
        &self.functionals
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.functionals.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }
}

/// The arrangement of reflecting hyperplanes of `rs`: one hyperplane per
/// positive root.
pub fn reflection_arrangement(rs: &RootSystem) -> Result<CentralArrangement> {
    let mut functionals = Vec::with_capacity(rs.num_positive_roots());
    for alpha in rs.positive_roots() {
        functionals.push(rs.form().mul_vec(alpha)?);
    }
    CentralArrangement::with_form(functionals, rs.form().clone())
}

/// One element of an intersection lattice: a subspace, stored as the
/// reduced echelon basis of the subspace itself.
#[derive(Clone, Debug)]
pub struct Flat {
    basis: Matrix,
    rank: usize,
    atoms: u128,
    mobius: i64,
}

impl Flat {
    /// Rows span the subspace (no rows for the origin).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Codimension in the ambient space.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Bitset of the hyperplanes containing this subspace.
    pub fn atoms(&self) -> u128 {
        self.atoms
    }

    pub fn mobius(&self) -> i64 {
        self.mobius
    }

    /// Subspace dimension.
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

/// All intersections of subsets of an arrangement's hyperplanes, ordered by
/// reverse inclusion (the whole space at the bottom, rank = codimension),
/// with Möbius values from the bottom element.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    flats: Vec<Flat>,
    dim: usize,
}

/// Intersect the row space of `basis` with the kernel of `functional`.
/// Returns the canonical (echelon) basis of the result.
fn cut_with_hyperplane(basis: &Matrix, functional: &Vector) -> Result<Matrix> {
    let values: Vec<Scalar> = (0..basis.rows())
        .map(|i| basis.row(i).dot(functional))
        .collect::<Result<_>>()?;
    let pivot = match values.iter().position(|v| !v.is_zero()) {
        Some(p) => p,
        None => return Ok(basis.clone()), // already inside the hyperplane
    };
    let mut rows = Vec::with_capacity(basis.rows() - 1);
    for i in 0..basis.rows() {
        if i == pivot {
            continue;
        }
        let coeff = &values[i] / &values[pivot];
        rows.push(basis.row(i).sub(&basis.row(pivot).scale(&coeff)));
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, basis.cols()));
    }
    Ok(Matrix::from_rows(rows).row_space_basis())
}

/// Which hyperplanes contain the row space of `basis`?
fn atoms_of(basis: &Matrix, functionals: &[Vector]) -> Result<u128> {
    let mut atoms = 0u128;
    'hyp: for (h, f) in functionals.iter().enumerate() {
        for i in 0..basis.rows() {
            if !basis.row(i).dot(f)?.is_zero() {
                continue 'hyp;
            }
        }
        atoms |= 1 << h;
    }
    Ok(atoms)
}

fn flat_key(basis: &Matrix) -> Vec<Scalar> {
    let mut key = Vec::with_capacity(basis.rows() * basis.cols());
    for i in 0..basis.rows() {
        for j in 0..basis.cols() {
            key.push(basis.get(i, j).clone());
        }
    }
    key
}

/// Build the intersection lattice under the default flat budget.
pub fn intersection_lattice(a: &CentralArrangement) -> Result<IntersectionLattice> {
    intersection_lattice_with_budget(a, DEFAULT_LATTICE_BUDGET)
}

/// Build the intersection lattice, failing once more than `budget` flats
/// have been discovered.
pub fn intersection_lattice_with_budget(
    a: &CentralArrangement,
    budget: usize,
) -> Result<IntersectionLattice> {
    let n = a.dim();
    let ambient = Matrix::identity(n).row_space_basis();
    let mut bases: Vec<Matrix> = vec![ambient.clone()];
    let mut atom_sets: Vec<u128> = vec![atoms_of(&ambient, a.functionals())?];
    let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
    index.insert(flat_key(&ambient), 0);
    let mut queue = vec![0usize];
    while let Some(at) = queue.pop() {
        let basis = bases[at].clone();
        let atoms = atom_sets[at];
        if basis.rows() == 0 {
            continue; // the origin admits no further cuts
        }
        for h in 0..a.num_hyperplanes() {
            if atoms & (1 << h) != 0 {
                continue;
            }
            let cut = cut_with_hyperplane(&basis, &a.functionals()[h])?;
            let key = flat_key(&cut);
            if index.contains_key(&key) {
                continue;
            }
            if bases.len() >= budget {
                return Err(Error::LatticeBudget(budget));
            }
            index.insert(key, bases.len());
            queue.push(bases.len());
            atom_sets.push(atoms_of(&cut, a.functionals())?);
            bases.push(cut);
        }
    }
    // Canonical order: by codimension, then by basis entries.
    let mut order: Vec<usize> = (0..bases.len()).collect();
    order.sort_by(|&i, &j| {
        let ri = n - bases[i].rows();
        let rj = n - bases[j].rows();
        ri.cmp(&rj).then_with(|| flat_key(&bases[i]).cmp(&flat_key(&bases[j])))
    });
    let mut flats: Vec<Flat> = order
        .into_iter()
        .map(|i| Flat {
            rank: n - bases[i].rows(),
            basis: bases[i].clone(),
            atoms: atom_sets[i],
            mobius: 0,
        })
        .collect();
    compute_mobius(&mut flats);
    Ok(IntersectionLattice { flats, dim: n })
}

/// Möbius values from the bottom: μ(0̂) = 1 and, for each flat X above the
/// bottom, μ(X) = −Σ μ(Y) over the flats Y strictly below X. "Below" is
/// reverse inclusion, decided by atom-set containment.
fn compute_mobius(flats: &mut [Flat]) {
    for i in 0..flats.len() {
        if flats[i].rank == 0 {
            flats[i].mobius = 1;
            continue;
        }
        let mut sum = 0i64;
        for j in 0..flats.len() {
            if flats[j].rank < flats[i].rank
                && flats[j].atoms & flats[i].atoms == flats[j].atoms
            {
                sum += flats[j].mobius;
            }
        }
        flats[i].mobius = -sum;
    }
}

impl IntersectionLattice {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Is X ≤ Y in the lattice order (X contains Y as a subspace)?
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.flats[x].atoms & self.flats[y].atoms == self.flats[x].atoms
    }

    /// The homogeneous part of the lattice at a given codimension.
    pub fn flats_of_rank(&self, rank: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.rank == rank)
    }
}

/// Integer polynomials in one variable `t`, dense by degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> IntPolynomial {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPolynomial { coeffs }
    }

    pub fn one() -> IntPolynomial {
        IntPolynomial { coeffs: vec![1] }
    }

    /// ∏ᵢ (1 + eᵢ·t).
    pub fn from_exponent_factors(exponents: &[u64]) -> IntPolynomial {
        let mut p = IntPolynomial::one();
        for &e in exponents {
            p = p.mul(&IntPolynomial::new(vec![1, e as i64]));
        }
        p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: i64) -> i64 {
        let mut acc: i128 = 0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x as i128 + *c as i128;
        }
        i64::try_from(acc).expect("polynomial value fits in i64")
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new(
            (0..len)
                .map(|k| self.coeff(k) - other.coeff(k))
                .collect(),
        )
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 && self.coeffs.len() > 1 {
                continue;
            }
            let sign = if first {
                if *c < 0 {
                    "-"
                } else {
                    ""
                }
            } else if *c < 0 {
                " - "
            } else {
                " + "
            };
            let mag = c.unsigned_abs();
            write!(f, "{sign}")?;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// π(A, t) = Σ_X μ(X)·(−t)^{rank X}.
pub fn poincare_polynomial(lattice: &IntersectionLattice) -> IntPolynomial {
    let mut coeffs = vec![0i64; lattice.dim() + 1];
    for flat in lattice.flats() {
        let signed = if flat.rank().is_multiple_of(2) {
            flat.mobius()
        } else {
            -flat.mobius()
        };
        coeffs[flat.rank()] += signed;
    }
    IntPolynomial::new(coeffs)
}

/// Does `p` equal ∏ᵢ (1 + (dᵢ−1)·t) for the given degrees?
pub fn verify_factorization(p: &IntPolynomial, degrees: &crate::catalog::DegreeMultiset) -> bool {
    p == &IntPolynomial::from_exponent_factors(&degrees.exponents())
}

/// Result of factoring a Poincaré polynomial into (1 + mᵢ·t) over ℤ.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Factorization {
    /// The sorted mᵢ with p = ∏ (1 + mᵢ t).
    Exponents(Vec<u64>),
    /// p does not split into integer linear factors.
    NonFactoring,
}

/// Factor π into linear integer factors by exact trial division.
pub fn exponents_from_lattice(lattice: &IntersectionLattice) -> Factorization {
    factor_poincare(&poincare_polynomial(lattice))
}

/// Factor an integer polynomial with constant term 1 as ∏ (1 + mᵢ t),
/// mᵢ ≥ 1, or report that it does not split.
pub fn factor_poincare(p: &IntPolynomial) -> Factorization {
    if p.coeff(0) != 1 {
        return Factorization::NonFactoring;
    }
    let mut rest = p.clone();
    let mut exponents = Vec::new();
    'outer: while rest.degree() >= 1 {
        let lead = rest.coeff(rest.degree());
        if lead <= 0 {
            return Factorization::NonFactoring;
        }
        // A factor 1 + mt forces m to divide the leading coefficient.
        for m in 1..=lead {
            if lead % m != 0 {
                continue;
            }
            if let Some(quotient) = divide_by_linear(&rest, m) {
                exponents.push(m as u64);
                rest = quotient;
                continue 'outer;
            }
        }
        return Factorization::NonFactoring;
    }
    if rest.coeff(0) != 1 {
        return Factorization::NonFactoring;
    }
    exponents.sort_unstable();
    Factorization::Exponents(exponents)
}

/// Exact division by (1 + m·t), if it divides.
fn divide_by_linear(p: &IntPolynomial, m: i64) -> Option<IntPolynomial> {
    let k = p.degree();
    if k == 0 {
        return None;
    }
    let mut q = vec![0i64; k];
    q[0] = p.coeff(0);
    for i in 1..k {
        q[i] = p.coeff(i) - m * q[i - 1];
    }
    if p.coeff(k) == m * q[k - 1] {
        Some(IntPolynomial::new(q))
    } else {
        None
    }
}

/// Zaslavsky's counts: total regions p(1) and bounded regions
/// (−1)^rank · p(−1), for the Poincaré polynomial of a real arrangement.
pub fn chamber_counts(p: &IntPolynomial, rank: usize) -> (i64, i64) {
    let total = p.eval(1);
    let signed = p.eval(-1);
    let bounded = if rank.is_multiple_of(2) { signed } else { -signed };
    (total, bounded)
}

/// The Poincaré polynomial of the rank-truncated lattice: flats of
/// codimension ≥ `ambient_rank` are dropped and Möbius values are
/// recomputed inside the smaller poset.
pub fn truncated_poincare(
    lattice: &IntersectionLattice,
    ambient_rank: usize,
) -> IntPolynomial {
    let mut kept: Vec<Flat> = lattice
        .flats()
        .iter()
        .filter(|f| f.rank() < ambient_rank)
        .cloned()
        .collect();
    compute_mobius(&mut kept);
    let mut coeffs = vec![0i64; ambient_rank.max(1)];
    for flat in &kept {
        let signed = if flat.rank().is_multiple_of(2) {
            flat.mobius()
        } else {
            -flat.mobius()
        };
        coeffs[flat.rank()] += signed;
    }
    IntPolynomial::new(coeffs)
}

/// Möbius values of the truncated poset, for coincidence checks against
/// the full lattice.
pub fn truncated_mobius(lattice: &IntersectionLattice, ambient_rank: usize) -> Vec<(usize, i64)> {
    let kept: Vec<(usize, Flat)> = lattice
        .flats()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.rank() < ambient_rank)
        .map(|(i, f)| (i, f.clone()))
        .collect();
    let mut flats: Vec<Flat> = kept.iter().map(|(_, f)| f.clone()).collect();
    compute_mobius(&mut flats);
    kept.iter()
        .zip(flats.iter())
        .map(|((i, _), f)| (*i, f.mobius()))
        .collect()
}

/// A generic affine slice: the hyperplane through ε·x normal to x (with
/// respect to the arrangement's form).
#[derive(Clone, Debug)]
pub struct AffineSlice {
    normal: Vector,
    epsilon: Scalar,
    offset: Scalar,
}

impl AffineSlice {
    pub fn new(a: &CentralArrangement, x: &Vector, epsilon: &Scalar) -> Result<AffineSlice> {
        if x.len() != a.dim() {
            return Err(Error::DimensionMismatch(format!(
                "slice normal of length {} in dimension {}",
                x.len(),
                a.dim()
            )));
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidArgument(
                "slice offset ε must be positive".into(),
            ));
        }
        let gx = a.form().mul_vec(x)?;
        let norm = x.dot(&gx)?;
        if !norm.is_positive() {
            return Err(Error::InvalidArgument(
                "slice normal must have positive squared length".into(),
            ));
        }
        Ok(AffineSlice {
            normal: x.clone(),
            epsilon: epsilon.clone(),
            offset: epsilon * &norm,
        })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }

    /// The affine equation of the slice is (x, y) = offset.
    pub fn offset(&self) -> &Scalar {
        &self.offset
    }
}

/// Does every nonzero lattice subspace meet the slice hyperplane through
/// ε·x? Equivalent to: no nonzero flat lies inside the kernel of (x, ·).
pub fn is_general_position(
    a: &CentralArrangement,
    lattice: &IntersectionLattice,
    x: &Vector,
    epsilon: &Scalar,
) -> Result<bool> {
    let _ = AffineSlice::new(a, x, epsilon)?; // validates x and ε
    let gx = a.form().mul_vec(x)?;
    'flat: for flat in lattice.flats() {
        if flat.dim() == 0 {
            continue; // "nonzero subspaces" only
        }
        for i in 0..flat.basis().rows() {
            if !flat.basis().row(i).dot(&gx)?.is_zero() {
                continue 'flat;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Independent geometric region count for a plane arrangement sliced by
/// the generic line through ε·x normal to x: the hyperplanes cross the
/// line in k distinct points, giving k+1 regions, k−1 of them bounded.
pub fn slice_region_counts_rank2(
    a: &CentralArrangement,
    x: &Vector,
    epsilon: &Scalar,
) -> Result<(u64, u64)> {
    if a.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "the geometric slice oracle is for the plane, not dimension {}",
            a.dim()
        )));
    }
    let slice = AffineSlice::new(a, x, epsilon)?;
    let gx = a.form().mul_vec(x)?;
    let kernel = Matrix::from_rows(vec![gx]).kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::NotGeneric(
            "slice normal has a degenerate form image".into(),
        ));
    }
    let direction = kernel.into_iter().next().unwrap();
    // Points on the slice line: y(t) = ε·x + t·direction.
    let mut crossings: HashSet<Scalar> = HashSet::new();
    for f in a.functionals() {
        let at_x = f.dot(x)?;
        let at_d = f.dot(&direction)?;
        if at_x.is_zero() {
            return Err(Error::NotGeneric(
                "slice center lies on a hyperplane of the arrangement".into(),
            ));
        }
        if at_d.is_zero() {
            return Err(Error::NotGeneric(
                "a hyperplane of the arrangement is parallel to the slice".into(),
            ));
        }
        crossings.insert(-&(&(slice.epsilon() * &at_x) / &at_d));
    }
    let k = crossings.len() as u64;
    if k == 0 {
        return Ok((1, 0));
    }
    Ok((k + 1, k - 1))
}
