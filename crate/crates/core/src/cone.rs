//! Exact rational polyhedral cones with dual representations.
//!
//! A [`Cone`] stores a canonical V-representation (extremal rays plus a
//! lineality lattice basis) and a canonical H-representation (facet normals
//! plus an equation lattice basis). Both are computed at construction by an
//! incremental double description pass over exact integers, so equal cones
//! always carry identical data and serialize to identical bytes.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    dot, dot_rat, kernel_lattice, neg_vec, primitive_from_rationals, primitivize, solve,
    to_rat_vec, IMatrix, Int, Rat,
};

/// Exact position of a point relative to a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// In the relative interior (interior within the cone's linear span).
    Interior,
    /// In the cone but not in its relative interior.
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    ambient_dim: usize,
    /// Extremal rays modulo lineality: primitive, orthogonal to the
    /// lineality space, sorted.
    rays: Vec<Vec<Int>>,
    /// HNF basis of the saturated lineality lattice `cone ∩ -cone`.
    lineality: Vec<Vec<Int>>,
    /// Facet normals modulo equations: primitive, inside the cone's linear
    /// span, sorted.
    facets: Vec<Vec<Int>>,
    /// HNF basis of the saturated lattice orthogonal to the cone's span.
    equations: Vec<Vec<Int>>,
}

fn unit(dim: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); dim];
    v[i] = Int::from(1);
    v
}

/// Extremal rays and lineality of `{x : <c, x> >= 0 for all c}`.
///
/// Incremental double description: start from the whole space, add one
/// halfspace at a time. While the lineality is cut, the pivot generator
/// moves into the ray list and everything else is slid onto the hyperplane;
/// afterwards the classic Motzkin step combines adjacent positive/negative
/// ray pairs. Adjacency is the combinatorial test over the tight sets of
/// the constraints processed so far, which keeps every intermediate ray
/// list minimal.
///
/// Returns the extremal rays only; callers recompute the lineality as a
/// saturated kernel lattice, which this pass does not guarantee.
fn dual_rays(dim: usize, constraints: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let cons: Vec<Vec<Int>> = constraints
        .iter()
        .filter_map(|c| primitivize(c.clone()))
        .collect();

    let mut lineality: Vec<Vec<Int>> = (0..dim).map(|i| unit(dim, i)).collect();
    let mut rays: Vec<Vec<Int>> = Vec::new();
    let mut processed: Vec<Vec<Int>> = Vec::new();

    for c in cons {
        let lin_vals: Vec<Int> = lineality.iter().map(|l| dot(&c, l)).collect();
        if let Some(k) = lin_vals.iter().position(|v| !v.is_zero()) {
            let mut l0 = lineality.remove(k);
            let mut a0 = lin_vals[k].clone();
            if a0.is_negative() {
                l0 = neg_vec(&l0);
                a0 = -a0;
            }
            for l in lineality.iter_mut() {
                let b = dot(&c, l);
                if b.is_zero() {
                    continue;
                }
                let combined: Vec<Int> = l.iter().zip(&l0).map(|(x, y)| &a0 * x - &b * y).collect();
                *l = primitivize(combined).expect("adjusted lineality vector is nonzero");
            }
            for r in rays.iter_mut() {
                let b = dot(&c, r);
                if b.is_zero() {
                    continue;
                }
                let combined: Vec<Int> = r.iter().zip(&l0).map(|(x, y)| &a0 * x - &b * y).collect();
                *r = primitivize(combined).expect("adjusted ray is nonzero");
            }
            rays.push(l0);
            processed.push(c);
            continue;
        }

        let vals: Vec<Int> = rays.iter().map(|r| dot(&c, r)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            processed.push(c);
            continue;
        }

        let tight: Vec<Vec<bool>> = rays
            .iter()
            .map(|r| processed.iter().map(|p| dot(p, r).is_zero()).collect())
            .collect();
        let adjacent = |i: usize, j: usize| -> bool {
            for (k, tk) in tight.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let dominated = tight[i]
                    .iter()
                    .zip(&tight[j])
                    .zip(tk)
                    .all(|((a, b), z)| !(*a && *b) || *z);
                if dominated {
                    return false;
                }
            }
            true
        };

        let mut new_rays: Vec<Vec<Int>> = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if !v.is_negative() {
                new_rays.push(rays[i].clone());
            }
        }
        for i in 0..rays.len() {
            if !vals[i].is_positive() {
                continue;
            }
            for j in 0..rays.len() {
                if !vals[j].is_negative() || !adjacent(i, j) {
                    continue;
                }
                let w: Vec<Int> = rays[j]
                    .iter()
                    .zip(&rays[i])
                    .map(|(rj, ri)| &vals[i] * rj - &vals[j] * ri)
                    .collect();
                if let Some(w) = primitivize(w) {
                    new_rays.push(w);
                }
            }
        }
        new_rays.sort_unstable();
        new_rays.dedup();
        rays = new_rays;
        processed.push(c);
    }
    rays
}

/// Canonical representative of a vector's class modulo the span of `basis`:
/// the primitive integer vector along its orthogonal projection off that
/// span. Representative-independent, hence deterministic.
fn project_off(v: &[Int], basis: &[Vec<Int>]) -> Option<Vec<Int>> {
    if basis.is_empty() {
        return primitivize(v.to_vec());
    }
    let k = basis.len();
    let gram: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| Rat::from(dot(&basis[i], &basis[j])))
                .collect()
        })
        .collect();
    let rhs: Vec<Rat> = basis.iter().map(|b| Rat::from(dot(b, v))).collect();
    let y = solve(&gram, &rhs).expect("Gram matrix of a lattice basis is invertible");
    let mut p = to_rat_vec(v);
    for (yi, b) in y.iter().zip(basis) {
        for (pc, bc) in p.iter_mut().zip(b) {
            *pc -= yi * Rat::from(bc.clone());
        }
    }
    primitive_from_rationals(&p)
}

fn canonical_reps(vecs: Vec<Vec<Int>>, basis: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = vecs.iter().filter_map(|v| project_off(v, basis)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl Cone {
    /// Cone positively spanned by the given vectors; zero vectors are
    /// ignored and the stored generator list is reduced to extremal rays.
    pub fn from_generators(ambient_dim: usize, gens: &[Vec<Int>]) -> Result<Cone> {
        for g in gens {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator has length {}, expected {}",
                    g.len(),
                    ambient_dim
                )));
            }
        }
        let gens: Vec<Vec<Int>> = gens.iter().filter_map(|g| primitivize(g.clone())).collect();
        let dual_rays_raw = dual_rays(ambient_dim, &gens);
        let equations = kernel_lattice(&IMatrix::from_rows(ambient_dim, gens)).row_vecs();
        let facets = canonical_reps(dual_rays_raw, &equations);
        Ok(Cone::from_canonical_hrep(ambient_dim, facets, equations))
    }

    /// Cone `{x : <n, x> >= 0 for every normal n}`.
    pub fn from_halfspaces(ambient_dim: usize, normals: &[Vec<Int>]) -> Result<Cone> {
        for n in normals {
            if n.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "normal has length {}, expected {}",
                    n.len(),
                    ambient_dim
                )));
            }
        }
        let normals: Vec<Vec<Int>> = normals
            .iter()
            .filter_map(|n| primitivize(n.clone()))
            .collect();
        let primal_rays = dual_rays(ambient_dim, &normals);
        let lineality = kernel_lattice(&IMatrix::from_rows(ambient_dim, normals)).row_vecs();
        let rays = canonical_reps(primal_rays, &lineality);

        let mut gens = rays.clone();
        for l in &lineality {
            gens.push(l.clone());
            gens.push(neg_vec(l));
        }
        let dual_rays_raw = dual_rays(ambient_dim, &gens);
        let equations = kernel_lattice(&IMatrix::from_rows(ambient_dim, gens)).row_vecs();
        let facets = canonical_reps(dual_rays_raw, &equations);
        Ok(Cone {
            ambient_dim,
            rays,
            lineality,
            facets,
            equations,
        })
    }

    /// Finishes construction once the canonical H-representation is known.
    fn from_canonical_hrep(
        ambient_dim: usize,
        facets: Vec<Vec<Int>>,
        equations: Vec<Vec<Int>>,
    ) -> Cone {
        let mut cons = facets.clone();
        for e in &equations {
            cons.push(e.clone());
            cons.push(neg_vec(e));
        }
        let primal_rays = dual_rays(ambient_dim, &cons);
        let lineality = kernel_lattice(&IMatrix::from_rows(ambient_dim, cons)).row_vecs();
        let rays = canonical_reps(primal_rays, &lineality);
        Cone {
            ambient_dim,
            rays,
            lineality,
            facets,
            equations,
        }
    }

    pub fn zero(ambient_dim: usize) -> Cone {
        Cone::from_generators(ambient_dim, &[]).expect("zero cone")
    }

    pub fn full_space(ambient_dim: usize) -> Cone {
        Cone::from_halfspaces(ambient_dim, &[]).expect("full space")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vec<Int>] {
        &self.lineality
    }

    pub fn facets(&self) -> &[Vec<Int>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<Int>] {
        &self.equations
    }

    /// Full generator list: extremal rays plus the lineality basis in both
    /// directions. This is the serialized V-representation.
    pub fn generators(&self) -> Vec<Vec<Int>> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg_vec(l));
        }
        g.sort_unstable();
        g
    }

    /// Full normal list: facets plus the equation basis in both directions.
    /// This is the serialized (minimal) H-representation.
    pub fn halfspaces(&self) -> Vec<Vec<Int>> {
        let mut h = self.facets.clone();
        for e in &self.equations {
            h.push(e.clone());
            h.push(neg_vec(e));
        }
        h.sort_unstable();
        h
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// True for the zero cone `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Set-theoretic intersection.
    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "intersect: ambient dims {} vs {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        let mut normals = self.halfspaces();
        normals.extend(other.halfspaces());
        Cone::from_halfspaces(self.ambient_dim, &normals)
    }

    /// Exact classification of a rational point.
    pub fn contains(&self, x: &[Rat]) -> Membership {
        assert_eq!(x.len(), self.ambient_dim, "contains: point length mismatch");
        for e in &self.equations {
            if !dot_rat(e, x).is_zero() {
                return Membership::Outside;
            }
        }
        let mut boundary = false;
        for f in &self.facets {
            let v = dot_rat(f, x);
            if v.is_negative() {
                return Membership::Outside;
            }
            if v.is_zero() {
                boundary = true;
            }
        }
        if boundary {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    pub fn contains_int(&self, x: &[Int]) -> Membership {
        self.contains(&to_rat_vec(x))
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.generators()
            .iter()
            .all(|g| other.contains_int(g) != Membership::Outside)
    }

    /// True iff `self` is a face of `other` (including `other` itself):
    /// `self` must equal `other` cut by the facet normals vanishing on it.
    pub fn is_face_of(&self, other: &Cone) -> bool {
        assert_eq!(
            self.ambient_dim, other.ambient_dim,
            "is_face_of: ambient dims differ"
        );
        if !self.is_subset_of(other) {
            return false;
        }
        let gens = self.generators();
        let tight: Vec<Vec<Int>> = other
            .facets
            .iter()
            .filter(|n| gens.iter().all(|g| dot(n, g).is_zero()))
            .cloned()
            .collect();
        let mut normals = other.halfspaces();
        for t in &tight {
            normals.push(t.clone());
            normals.push(neg_vec(t));
        }
        match Cone::from_halfspaces(self.ambient_dim, &normals) {
            Ok(face) => face == *self,
            Err(_) => false,
        }
    }

    /// Deterministic point in the relative interior: the sum of the
    /// canonical extremal rays.
    pub fn relint_point(&self) -> Result<Vec<Rat>> {
        if self.is_trivial() {
            return Err(Error::ZeroCone);
        }
        let mut p = vec![Rat::zero(); self.ambient_dim];
        for r in &self.rays {
            for (pc, rc) in p.iter_mut().zip(r) {
                *pc += Rat::from(rc.clone());
            }
        }
        debug_assert_eq!(self.contains(&p), Membership::Interior);
        Ok(p)
    }
}
