//! Construction and verification of D-flips from non-projective complete
//! simplicial fans to projective ones, plus the full pipeline: small
//! resolution by simplicial subdivision followed by one flip.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;

use crate::cone::{Cone, Membership};
use crate::divisor::{self, DivClass, TDivisor};
use crate::error::{Error, Result};
use crate::fan::{added_walls, Fan, SubdivisionReport};
use crate::gkz::{self, WeightMatrix};
use crate::linalg::{self, solve, to_rat_vec, Rat};

/// A checkable witness that `source -> target` is a D-flip: both fans share
/// one ray matrix (so the map is an isomorphism in codimension one), the
/// source's nef cone is a proper face of the target chamber, and the
/// divisor's class sits in the chamber's relative interior.
#[derive(Clone, Debug)]
pub struct FlipCertificate {
    pub source: Fan,
    pub target: Fan,
    /// Integer-coefficient divisor, Cartier on the source.
    pub divisor: TDivisor,
    pub divisor_class: DivClass,
    pub source_nef: Cone,
    pub target_chamber: Cone,
    /// Named results of [`verify_flip`].
    pub checks: BTreeMap<String, bool>,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: BTreeMap<String, bool>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }
}

/// One rational divisor with the given class: solve `Q a = w` on the
/// lexicographically first invertible column basis of `Q`, zero elsewhere.
fn divisor_with_class(q: &WeightMatrix, w: &[Rat]) -> Result<TDivisor> {
    let r = q.rank();
    let m = q.cols();
    for basis in (0..m).combinations(r) {
        let sub = q.matrix().select_cols(&basis);
        if linalg::rank(&sub) != r {
            continue;
        }
        let rows: Vec<Vec<Rat>> = (0..r).map(|i| to_rat_vec(sub.row(i))).collect();
        let sol = solve(&rows, w).expect("basis columns are invertible");
        let mut coeffs = vec![Rat::zero(); m];
        for (&idx, val) in basis.iter().zip(sol) {
            coeffs[idx] = val;
        }
        return Ok(TDivisor::new(coeffs));
    }
    Err(Error::RankDeficient(
        "weight matrix has no invertible column basis".into(),
    ))
}

/// Builds a certified D-flip for a non-projective complete simplicial fan.
///
/// Among the full-dimensional chambers having the fan's nef cone as a face,
/// the one with the least canonical serialized cone is chosen; the divisor
/// is the Cartier multiple of the preimage of the chamber's relative
/// interior point.
pub fn find_flip(f: &Fan, q: &WeightMatrix) -> Result<FlipCertificate> {
    if !f.is_complete()? {
        return Err(Error::NotComplete);
    }
    if !f.is_simplicial()? {
        return Err(Error::NotSimplicial);
    }
    if gkz::is_projective(f, q)? {
        return Err(Error::AlreadyProjective);
    }
    let nef = gkz::nef_cone(f, q)?;
    let sf = gkz::secondary_fan(q)?;
    let chamber = sf
        .chambers
        .iter()
        .find(|c| nef.is_face_of(&c.cone))
        .ok_or_else(|| {
            Error::Inconsistency("no full-dimensional chamber has the nef cone as a face".into())
        })?;
    let target = gkz::chamber_to_fan(q, chamber, f.fan_matrix())?;
    let w = chamber.cone.relint_point()?;
    let preimage = divisor_with_class(q, &w)?;
    let multiple = divisor::cartier_multiple(f, &preimage)?;
    let d = preimage.scaled(&multiple);
    let divisor_class = divisor::divisor_class(q, &d)?;
    let mut cert = FlipCertificate {
        source: f.clone(),
        target,
        divisor: d,
        divisor_class,
        source_nef: nef,
        target_chamber: chamber.cone.clone(),
        checks: BTreeMap::new(),
    };
    cert.checks = verify_flip(&cert, q).checks;
    Ok(cert)
}

/// Recomputes every certificate condition from scratch. Verification is
/// total: failures are listed per check, never raised.
pub fn verify_flip(cert: &FlipCertificate, q: &WeightMatrix) -> VerificationReport {
    let mut checks = BTreeMap::new();
    let mut record = |name: &str, ok: bool| {
        checks.insert(name.to_string(), ok);
    };

    let same_rays = cert.source.fan_matrix() == cert.target.fan_matrix()
        && cert.source.max_cones() != cert.target.max_cones();
    record("same_rays_distinct_fans", same_rays);

    let target_model = (|| -> Result<bool> {
        Ok(cert.target.is_valid()
            && cert.target.is_complete()?
            && cert.target.is_simplicial()?
            && gkz::is_projective(&cert.target, q)?)
    })()
    .unwrap_or(false);
    record("target_complete_simplicial_projective", target_model);

    let nefs = (|| -> Result<(Cone, Cone)> {
        Ok((
            gkz::nef_cone(&cert.source, q)?,
            gkz::nef_cone(&cert.target, q)?,
        ))
    })()
    .ok();
    let proper_face = match &nefs {
        Some((s, t)) => s.is_face_of(t) && s != t,
        None => false,
    };
    record("source_nef_proper_face_of_target_nef", proper_face);

    let cartier = divisor::is_cartier(&cert.source, &cert.divisor)
        .map(|(ok, _)| ok)
        .unwrap_or(false);
    record("divisor_cartier_on_source", cartier);

    let class_ok = match (&nefs, divisor::divisor_class(q, &cert.divisor)) {
        (Some((s, t)), Ok(class)) => {
            let against_target = t.contains(class.as_point());
            let against_source = s.contains(class.as_point());
            against_target == Membership::Interior
                && against_source != Membership::Interior
                && (!proper_face || against_source == Membership::Outside)
        }
        _ => false,
    };
    record("class_interior_to_target_off_source_nef", class_ok);

    let ample = divisor::is_ample(&cert.target, q, &cert.divisor).unwrap_or(false);
    record("divisor_ample_on_target", ample);

    VerificationReport { checks }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Scan all simplicial subdivisions for a projective one before falling
    /// back to the first; by default the first subdivision is taken even
    /// when it forces a flip.
    pub prefer_projective_subdivision: bool,
    /// Weight matrix to use instead of the computed Gale dual.
    pub weights: Option<WeightMatrix>,
}

/// Result of the full pipeline: optional small resolution, optional flip,
/// and a final fan that is valid, complete, simplicial and projective.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub input: Fan,
    pub resolution: Option<SubdivisionReport>,
    pub flip: Option<FlipCertificate>,
    pub final_fan: Fan,
}

/// Full pipeline on a complete fan: simplicially subdivide when needed,
/// then flip to a projective model when the resolution is not projective.
pub fn projectivize(f: &Fan, opts: &PipelineOptions) -> Result<PipelineResult> {
    if !f.is_complete()? {
        return Err(Error::NotComplete);
    }
    let q = match &opts.weights {
        Some(q) => {
            if q.cols() != f.ray_count() {
                return Err(Error::DimensionMismatch(format!(
                    "weight matrix has {} columns but the fan has {} rays",
                    q.cols(),
                    f.ray_count()
                )));
            }
            q.clone()
        }
        None => WeightMatrix::gale_dual(f.fan_matrix())?,
    };

    let (resolution, resolved) = if f.is_simplicial()? {
        (None, f.clone())
    } else {
        let subdivisions = f.simplicial_subdivisions()?;
        let mut chosen = None;
        if opts.prefer_projective_subdivision {
            for s in &subdivisions {
                if gkz::is_projective(s, &q)? {
                    chosen = Some(s.clone());
                    break;
                }
            }
        }
        let child = chosen.unwrap_or_else(|| subdivisions[0].clone());
        (Some(added_walls(f, &child)?), child)
    };

    if gkz::is_projective(&resolved, &q)? {
        return Ok(PipelineResult {
            input: f.clone(),
            resolution,
            flip: None,
            final_fan: resolved,
        });
    }
    let cert = find_flip(&resolved, &q)?;
    let final_fan = cert.target.clone();
    Ok(PipelineResult {
        input: f.clone(),
        resolution,
        flip: Some(cert),
        final_fan,
    })
}
