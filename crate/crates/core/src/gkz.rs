//! Gale duality and the secondary-fan layer: weight matrices, effective and
//! moving cones, bunches of cones, nef cones, chamber enumeration inside the
//! moving cone, and the chamber-to-fan dictionary.

use itertools::Itertools;

use num_traits::{Signed, Zero};

use crate::cone::{Cone, Membership};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{self, hnf, kernel_lattice, neg_vec, to_rat_vec, IMatrix, Int, Rat};

/// Where a weight matrix came from; user-supplied matrices let golden data
/// be expressed in the coordinates of an external reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSource {
    Computed,
    Supplied,
}

/// Gale dual `Q` of a fan matrix `V`: the rows form a saturated basis of
/// `{x : V x = 0}`, so `Q V^T = 0` and the columns of `Q` are the classes
/// of the prime invariant divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    q: IMatrix,
    source: WeightSource,
}

impl WeightMatrix {
    /// Deterministic Gale dual: the HNF basis of the saturated kernel
    /// lattice of `v`'s columns. Errors when `v` is rank-deficient, has no
    /// more columns than rows, or presents a torsion class group.
    pub fn gale_dual(v: &IMatrix) -> Result<WeightMatrix> {
        let n = v.rows();
        let m = v.cols();
        if linalg::rank(v) != n {
            return Err(Error::RankDeficient(format!(
                "fan matrix has rank {} < {}",
                linalg::rank(v),
                n
            )));
        }
        if m <= n {
            return Err(Error::DegenerateWeights(format!(
                "fan matrix needs more columns than rows ({m} <= {n})"
            )));
        }
        let q = kernel_lattice(v);
        // Torsion check: the class group is free iff the row lattice of v
        // is saturated, i.e. equals the kernel of its own kernel.
        let saturation = kernel_lattice(&q);
        if hnf(v).h != saturation {
            return Err(Error::TorsionClassGroup);
        }
        Ok(WeightMatrix {
            q,
            source: WeightSource::Computed,
        })
    }

    /// Accepts a user-supplied Gale dual after validating `q v^T = 0` and
    /// row-lattice equality with the computed one.
    pub fn from_supplied(v: &IMatrix, q: IMatrix) -> Result<WeightMatrix> {
        let computed = WeightMatrix::gale_dual(v)?;
        if q.rows() != computed.q.rows() || q.cols() != computed.q.cols() {
            return Err(Error::WeightMismatch(format!(
                "expected a {}x{} matrix, got {}x{}",
                computed.q.rows(),
                computed.q.cols(),
                q.rows(),
                q.cols()
            )));
        }
        if !q.matmul(&v.transpose()).is_zero() {
            return Err(Error::WeightMismatch("Q V^T != 0".into()));
        }
        if hnf(&q).h != computed.q {
            return Err(Error::WeightMismatch(
                "row lattice differs from the saturated kernel lattice".into(),
            ));
        }
        Ok(WeightMatrix {
            q,
            source: WeightSource::Supplied,
        })
    }

    pub fn matrix(&self) -> &IMatrix {
        &self.q
    }

    pub fn source(&self) -> WeightSource {
        self.source
    }

    /// Picard rank r = m - n.
    pub fn rank(&self) -> usize {
        self.q.rows()
    }

    pub fn cols(&self) -> usize {
        self.q.cols()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        self.q.col(j)
    }

    fn cone_of_cols(&self, idx: &[usize]) -> Result<Cone> {
        let gens: Vec<Vec<Int>> = idx.iter().map(|&j| self.col(j)).collect();
        Cone::from_generators(self.rank(), &gens)
    }
}

/// Cone spanned by all columns of `Q`: the effective cone, reduced to its
/// extremal rays.
pub fn effective_cone(q: &WeightMatrix) -> Cone {
    q.cone_of_cols(&(0..q.cols()).collect::<Vec<_>>())
        .expect("column dimensions agree")
}

/// The moving cone: intersection over j of the cones spanned by all columns
/// except the j-th.
pub fn moving_cone(q: &WeightMatrix) -> Result<Cone> {
    let m = q.cols();
    if m <= q.rank() {
        return Err(Error::DegenerateWeights(format!(
            "moving cone needs more columns than the rank ({m} <= {})",
            q.rank()
        )));
    }
    let mut mov: Option<Cone> = None;
    for j in 0..m {
        let idx: Vec<usize> = (0..m).filter(|&k| k != j).collect();
        let c = q.cone_of_cols(&idx)?;
        mov = Some(match mov {
            None => c,
            Some(acc) => acc.intersect(&c)?,
        });
    }
    Ok(mov.expect("at least one column"))
}

fn require_bunch_input(f: &Fan, q: &WeightMatrix) -> Result<()> {
    if !f.is_simplicial()? {
        return Err(Error::NotSimplicial);
    }
    if !f.is_complete()? {
        return Err(Error::NotComplete);
    }
    if f.ray_count() != q.cols() {
        return Err(Error::DimensionMismatch(format!(
            "fan has {} rays but the weight matrix has {} columns",
            f.ray_count(),
            q.cols()
        )));
    }
    Ok(())
}

/// The bunch of cones of a complete simplicial fan: for each maximal cone,
/// the cone spanned by the complementary columns of `Q`, deduplicated and
/// in canonical order.
pub fn bunch(f: &Fan, q: &WeightMatrix) -> Result<Vec<Cone>> {
    require_bunch_input(f, q)?;
    let m = q.cols();
    let mut cones: Vec<Cone> = Vec::new();
    for indices in f.max_cones() {
        let complement: Vec<usize> = (0..m).filter(|j| !indices.contains(j)).collect();
        cones.push(q.cone_of_cols(&complement)?);
    }
    cones.sort_unstable();
    cones.dedup();
    Ok(cones)
}

/// Nef cone as the intersection of all bunch cones.
pub fn nef_cone(f: &Fan, q: &WeightMatrix) -> Result<Cone> {
    let cones = bunch(f, q)?;
    let mut iter = cones.into_iter();
    let mut nef = iter.next().ok_or(Error::NotComplete)?;
    for c in iter {
        nef = nef.intersect(&c)?;
    }
    Ok(nef)
}

/// Whether the fan's variety is projective: the nef cone is a
/// full-dimensional chamber of the secondary fan.
pub fn is_projective(f: &Fan, q: &WeightMatrix) -> Result<bool> {
    Ok(nef_cone(f, q)?.dim() == q.rank())
}

/// Full-dimensional GKZ chamber inside the moving cone, together with the
/// n-element ray index sets whose complementary weight cones contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub cone: Cone,
    pub compatible_bases: Vec<Vec<usize>>,
}

/// Shared facet between two chambers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cone: Cone,
    pub chambers: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct SecondaryFan {
    pub weights: WeightMatrix,
    pub mov: Cone,
    pub chambers: Vec<Chamber>,
    pub walls: Vec<Wall>,
}

/// All full-dimensional chambers of the GKZ decomposition inside the moving
/// cone.
///
/// Successive hyperplane refinement: every hyperplane spanned by r-1
/// independent columns of `Q` splits every current cell; full-dimensional
/// pieces survive. The surviving cells are exactly the chambers of the
/// common refinement of all column-subset cones, restricted to Mov.
pub fn secondary_fan(q: &WeightMatrix) -> Result<SecondaryFan> {
    let r = q.rank();
    let m = q.cols();
    if m <= r {
        return Err(Error::DegenerateWeights(format!(
            "secondary fan needs more columns than the rank ({m} <= {r})"
        )));
    }
    let mov = moving_cone(q)?;

    let mut hyperplanes: Vec<Vec<Int>> = Vec::new();
    for subset in (0..m).combinations(r.saturating_sub(1)) {
        let sub = q.matrix().select_cols(&subset);
        if linalg::rank(&sub) != r - 1 {
            continue;
        }
        let normal = kernel_lattice(&sub.transpose());
        debug_assert_eq!(normal.rows(), 1);
        let mut n = normal.row(0).to_vec();
        if let Some(first) = n.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                n = neg_vec(&n);
            }
        }
        hyperplanes.push(n);
    }
    hyperplanes.sort_unstable();
    hyperplanes.dedup();

    let mut cells: Vec<Cone> = if mov.dim() == r {
        vec![mov.clone()]
    } else {
        Vec::new()
    };
    for h in &hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            let mut plus = cell.halfspaces();
            plus.push(h.clone());
            let mut minus = cell.halfspaces();
            minus.push(neg_vec(h));
            for side in [plus, minus] {
                let piece = Cone::from_halfspaces(r, &side)?;
                if piece.dim() == r {
                    next.push(piece);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        cells = next;
    }
    cells.sort_by(crate::json::cone_canonical_cmp);

    let n = m - r;
    let mut chambers = Vec::with_capacity(cells.len());
    for cone in cells {
        let w = cone.relint_point()?;
        let compatible_bases = compatible_bases_of_point(q, n, &w)?;
        chambers.push(Chamber {
            cone,
            compatible_bases,
        });
    }

    let mut walls = Vec::new();
    for i in 0..chambers.len() {
        for j in i + 1..chambers.len() {
            let w = chambers[i].cone.intersect(&chambers[j].cone)?;
            if w.dim() == r - 1 {
                debug_assert!(w.is_face_of(&chambers[i].cone));
                debug_assert!(w.is_face_of(&chambers[j].cone));
                walls.push(Wall {
                    cone: w,
                    chambers: (i, j),
                });
            }
        }
    }

    Ok(SecondaryFan {
        weights: q.clone(),
        mov,
        chambers,
        walls,
    })
}

/// The n-element index sets I with `point` inside the cone of the columns
/// complementary to I.
pub fn compatible_bases_of_point(
    q: &WeightMatrix,
    n: usize,
    point: &[Rat],
) -> Result<Vec<Vec<usize>>> {
    let m = q.cols();
    let mut bases = Vec::new();
    for subset in (0..m).combinations(n) {
        let complement: Vec<usize> = (0..m).filter(|j| !subset.contains(j)).collect();
        let cone = q.cone_of_cols(&complement)?;
        if cone.contains(point) != Membership::Outside {
            bases.push(subset);
        }
    }
    Ok(bases)
}

/// The fan of a full-dimensional chamber: maximal cones are the independent
/// n-subsets whose complementary weight cone contains the chamber.
/// The result is checked to be a valid, complete, simplicial fan whose nef
/// cone reproduces the chamber.
pub fn chamber_to_fan(q: &WeightMatrix, chamber: &Chamber, v: &IMatrix) -> Result<Fan> {
    let r = q.rank();
    if chamber.cone.dim() != r {
        return Err(Error::ChamberNotFullDimensional);
    }
    if v.cols() != q.cols() {
        return Err(Error::DimensionMismatch(format!(
            "fan matrix has {} columns but the weight matrix has {}",
            v.cols(),
            q.cols()
        )));
    }
    let n = v.rows();
    let w = chamber.cone.relint_point()?;
    let mut cones = Vec::new();
    for subset in compatible_bases_of_point(q, n, &w)? {
        if linalg::rank(&v.select_cols(&subset)) == n {
            cones.push(subset);
        }
    }
    let fan = Fan::new(v.clone(), cones)?;
    if !fan.is_valid() {
        return Err(Error::Inconsistency(
            "chamber produced an invalid fan".into(),
        ));
    }
    if !fan.is_complete()? || !fan.is_simplicial()? {
        return Err(Error::Inconsistency(
            "chamber produced a non-complete or non-simplicial fan".into(),
        ));
    }
    let nef = nef_cone(&fan, q)?;
    if nef != chamber.cone {
        return Err(Error::Inconsistency(
            "nef cone of the chamber fan does not reproduce the chamber".into(),
        ));
    }
    Ok(fan)
}

/// The class of the sum of all prime invariant divisors: the sum of `Q`'s
/// columns.
pub fn anticanonical_vector(q: &WeightMatrix) -> Vec<Int> {
    let mut sum = vec![Int::zero(); q.rank()];
    for j in 0..q.cols() {
        for (s, c) in sum.iter_mut().zip(q.col(j)) {
            *s += c;
        }
    }
    sum
}

/// Rational coordinates of the anticanonical class.
pub fn anticanonical_point(q: &WeightMatrix) -> Vec<Rat> {
    to_rat_vec(&anticanonical_vector(q))
}
