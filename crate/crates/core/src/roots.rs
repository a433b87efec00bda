//! Root systems: closure of a simple system under its own reflections,
//! positivity, cone and chamber membership, and fundamental coweights.
//!
//! Vectors live in the realization's ambient coordinates and all geometry
//! goes through the realization's bilinear form (see the catalog module).

use crate::catalog::{degrees, DegreeMultiset, Family, Realization};
use crate::diagram::CoxeterDiagram;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;
use std::collections::HashSet;

/// Hard ceiling on the closure size; the largest cataloged system (E8) has
/// 240 roots, so hitting this means the input was not finite type.
const ROOT_CLOSURE_CAP: usize = 4096;

/// Coordinates of a vector in the simple-root base, or the verdict that the
/// base does not span the ambient space (the open cone is then empty and
/// its volume zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConeCoefficients {
    Coefficients(Vector),
    RankDeficient,
}

impl ConeCoefficients {
    pub fn coefficients(&self) -> Option<&Vector> {
        match self {
            ConeCoefficients::Coefficients(c) => Some(c),
            ConeCoefficients::RankDeficient => None,
        }
    }
}

/// A realized finite root system: the chosen base plus the full set of
/// positive roots, with each root's exact base coordinates cached.
#[derive(Clone, Debug)]
pub struct RootSystem {
    realization: Realization,
    positive_roots: Vec<Vector>,
    positive_coefficients: Vec<Vector>,
}

impl RootSystem {
    /// Close the realization's base under its simple reflections.
    pub fn generate(realization: Realization) -> Result<RootSystem> {
        let simple = realization.simple_roots();
        let k = simple.rows();
        let n = simple.cols();
        if k == 0 || n == 0 {
            return Err(Error::InvalidArgument("empty simple system".into()));
        }
        if simple.rank() != k {
            return Err(Error::InvalidArgument(
                "simple roots must be linearly independent".into(),
            ));
        }
        let reflections: Vec<Matrix> = (0..k)
            .map(|i| reflection_matrix(simple, realization.form(), i))
            .collect::<Result<_>>()?;
        let mut seen: HashSet<Vec<Scalar>> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        for i in 0..k {
            let root = simple.row(i);
            if seen.insert(root.iter().cloned().collect()) {
                order.push(root.clone());
                queue.push_back(root);
            }
        }
        while let Some(x) = queue.pop_front() {
            for refl in &reflections {
                let y = refl.mul_vec(&x)?;
                if seen.insert(y.iter().cloned().collect()) {
                    if seen.len() > ROOT_CLOSURE_CAP {
                        return Err(Error::RootClosureDiverged(ROOT_CLOSURE_CAP));
                    }
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        // Split by the sign of the base coordinates; closure theory says
        // every root is one-signed, which the error branch double-checks.
        let simple_t = simple.transpose();
        let mut positive_roots = Vec::new();
        let mut positive_coefficients = Vec::new();
        for root in order {
            let c = simple_t
                .solve_any(&root)?
                .expect("closure stays inside the span of the base");
            if c.iter().all(|v| !v.is_negative()) {
                positive_roots.push(root);
                positive_coefficients.push(c);
            } else if !c.iter().all(|v| !v.is_positive()) {
                return Err(Error::InvalidArgument(format!(
                    "root {root:?} is not one-signed over the base; \
                     the input was not a finite simple system"
                )));
            }
        }
        Ok(RootSystem {
            realization,
            positive_roots,
            positive_coefficients,
        })
    }

    pub fn of_family(family: Family) -> Result<RootSystem> {
        RootSystem::generate(Realization::of_family(family)?)
    }

    pub fn from_diagram(diagram: CoxeterDiagram) -> Result<RootSystem> {
        RootSystem::generate(Realization::from_diagram(diagram)?)
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn family(&self) -> Option<Family> {
        self.realization.family()
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        self.realization.diagram()
    }

    /// Rows are the simple roots in ambient coordinates.
    pub fn simple(&self) -> &Matrix {
        self.realization.simple_roots()
    }

    pub fn form(&self) -> &Matrix {
        self.realization.form()
    }

    pub fn ambient_dim(&self) -> usize {
        self.simple().cols()
    }

    pub fn rank(&self) -> usize {
        self.simple().rows()
    }

    pub fn positive_roots(&self) -> &[Vector] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Base coordinates of the i-th positive root.
    pub fn positive_root_coefficients(&self) -> &[Vector] {
        &self.positive_coefficients
    }

    pub fn degrees(&self) -> Result<DegreeMultiset> {
        degrees(self.diagram())
    }

    /// The bilinear form product (u, v) of the realization.
    pub fn form_product(&self, u: &Vector, v: &Vector) -> Result<Scalar> {
        let gv = self.form().mul_vec(v)?;
        u.dot(&gv)
    }

    /// Exact base coordinates of `x`, or the rank-deficiency flag when the
    /// base does not span the ambient space.
    pub fn cone_coefficients(&self, x: &Vector) -> Result<ConeCoefficients> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has length {}, ambient dimension is {}",
                x.len(),
                self.ambient_dim()
            )));
        }
        if self.rank() < self.ambient_dim() {
            return Ok(ConeCoefficients::RankDeficient);
        }
        let c = self
            .simple()
            .transpose()
            .solve_any(x)?
            .expect("full-rank base spans the ambient space");
        Ok(ConeCoefficients::Coefficients(c))
    }

    /// Is `x` a strictly positive combination of the simple roots?
    pub fn in_open_cone(&self, x: &Vector) -> Result<bool> {
        Ok(match self.cone_coefficients(x)? {
            ConeCoefficients::RankDeficient => false,
            ConeCoefficients::Coefficients(c) => c.iter().all(Scalar::is_positive),
        })
    }

    /// Is (x, αᵢ) > 0 for every simple root αᵢ?
    pub fn in_fundamental_chamber(&self, x: &Vector) -> Result<bool> {
        let gx = self.form().mul_vec(x)?;
        for i in 0..self.rank() {
            if !self.simple().row(i).dot(&gx)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The dual basis ωᵢ with (ωᵢ, αⱼ) = δᵢⱼ. Requires a full-rank base.
    pub fn fundamental_coweights(&self) -> Result<Vec<Vector>> {
        if self.rank() < self.ambient_dim() {
            return Err(Error::InvalidArgument(
                "coweights need a base spanning the ambient space".into(),
            ));
        }
        let pairing = self.simple().mul(self.form())?;
        let inv = pairing
            .inverse()?
            .expect("Gram pairing of an independent base is invertible");
        Ok((0..self.rank()).map(|i| {
            Vector::new((0..self.rank()).map(|r| inv.get(r, i).clone()).collect())
        }).collect())
    }

    /// The unique positive root of maximal height (coefficient sum over the
    /// base). Unique for irreducible systems.
    pub fn highest_root(&self) -> Result<Vector> {
        let heights: Vec<Scalar> = self
            .positive_coefficients
            .iter()
            .map(|c| {
                let mut h = Scalar::zero();
                for v in c.iter() {
                    h += v;
                }
                h
            })
            .collect();
        let best = heights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .ok_or_else(|| Error::InvalidArgument("no positive roots".into()))?;
        if heights
            .iter()
            .enumerate()
            .any(|(i, h)| i != best && h == &heights[best])
        {
            return Err(Error::InvalidArgument(
                "highest root is not unique; the system is reducible".into(),
            ));
        }
        Ok(self.positive_roots[best].clone())
    }

    /// The same system with each base root αᵢ replaced by λᵢαᵢ, λᵢ > 0.
    /// Membership predicates and counts are unaffected; tests assert this.
    pub fn rescaled_base(&self, scales: &[Scalar]) -> Result<RootSystem> {
        RootSystem::generate(self.realization.rescaled(scales)?)
    }

    /// The reflection through the i-th simple root, as a matrix acting on
    /// ambient column vectors. Satisfies MᵀGM = G for the form G.
    pub fn simple_reflection(&self, i: usize) -> Result<Matrix> {
        reflection_matrix(self.simple(), self.form(), i)
    }
}

/// Reflection through row `i` of `simple`: x ↦ x − 2(α,x)/(α,α) · α.
fn reflection_matrix(simple: &Matrix, form: &Matrix, i: usize) -> Result<Matrix> {
    let n = simple.cols();
    let alpha = simple.row(i);
    let g_alpha = form.mul_vec(&alpha)?;
    let norm = alpha.dot(&g_alpha)?;
    if !norm.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "simple root {i} has non-positive squared length"
        )));
    }
    let c = &Scalar::from_int(2) / &norm;
    Ok(Matrix::from_fn(n, n, |r, s| {
        let outer = &(&alpha[r] * &g_alpha[s]) * &c;
        if r == s {
            &Scalar::one() - &outer
        } else {
            -&outer
        }
    }))
}
