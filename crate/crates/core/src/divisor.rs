//! Torus-invariant divisors: the class-group degree map, the anti-canonical
//! class, and Cartier and ample tests.

use num_integer::Integer;
use num_traits::One;

use crate::cone::Membership;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::gkz::{self, WeightMatrix};
use crate::linalg::{solve, to_rat_vec, Int, Rat};

/// A torus-invariant divisor `sum a_rho D_rho`, one rational coefficient
/// per ray of the fan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDivisor {
    coeffs: Vec<Rat>,
}

impl TDivisor {
    pub fn new(coeffs: Vec<Rat>) -> TDivisor {
        TDivisor { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> TDivisor {
        TDivisor {
            coeffs: coeffs.iter().map(|&x| Rat::from(Int::from(x))).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn scaled(&self, t: &Int) -> TDivisor {
        TDivisor {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c * Rat::from(t.clone()))
                .collect(),
        }
    }
}

/// A divisor class in the free part of the class group, written in the
/// coordinates of the chosen weight matrix's row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivClass {
    coords: Vec<Rat>,
}

impl DivClass {
    pub fn new(coords: Vec<Rat>) -> DivClass {
        DivClass { coords }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn as_point(&self) -> &[Rat] {
        &self.coords
    }
}

/// Degree map: the class of a divisor is `Q * coeffs`.
pub fn divisor_class(q: &WeightMatrix, d: &TDivisor) -> Result<DivClass> {
    if d.len() != q.cols() {
        return Err(Error::DimensionMismatch(format!(
            "divisor has {} coefficients but the fan has {} rays",
            d.len(),
            q.cols()
        )));
    }
    let coords = (0..q.rank())
        .map(|i| {
            q.matrix()
                .row(i)
                .iter()
                .zip(d.coeffs())
                .map(|(a, c)| Rat::from(a.clone()) * c)
                .sum()
        })
        .collect();
    Ok(DivClass { coords })
}

/// The anti-canonical class `[sum_rho D_rho]`: the sum of `Q`'s columns.
pub fn anticanonical_class(q: &WeightMatrix) -> DivClass {
    DivClass {
        coords: gkz::anticanonical_point(q),
    }
}

/// Exact solution data of one per-cone Cartier system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    /// Ray indices of the maximal cone.
    pub cone: Vec<usize>,
    /// The rational vector m with `<m, v_i> = -a_i` on the cone's rays.
    pub m: Vec<Rat>,
    pub integral: bool,
}

fn cartier_data(f: &Fan, d: &TDivisor) -> Result<Vec<CartierData>> {
    if d.len() != f.ray_count() {
        return Err(Error::DimensionMismatch(format!(
            "divisor has {} coefficients but the fan has {} rays",
            d.len(),
            f.ray_count()
        )));
    }
    let mut out = Vec::with_capacity(f.max_cones().len());
    for indices in f.max_cones() {
        let rows: Vec<Vec<Rat>> = indices.iter().map(|&i| to_rat_vec(&f.ray(i))).collect();
        let rhs: Vec<Rat> = indices.iter().map(|&i| -d.coeffs()[i].clone()).collect();
        let Some(m) = solve(&rows, &rhs) else {
            // Impossible on simplicial cones; reported for non-simplicial ones.
            return Err(Error::NotQCartier(indices.clone()));
        };
        let integral = m.iter().all(|x| x.denom().is_one());
        out.push(CartierData {
            cone: indices.clone(),
            m,
            integral,
        });
    }
    Ok(out)
}

/// Cartier test for an integral divisor: on every maximal cone there must
/// be an integer linear functional matching the coefficients on the cone's
/// rays. Returns the per-cone solutions with integrality flags.
pub fn is_cartier(f: &Fan, d: &TDivisor) -> Result<(bool, Vec<CartierData>)> {
    if !f.is_valid() {
        return Err(Error::InvalidFan("is_cartier needs a valid fan".into()));
    }
    if !d.is_integral() {
        return Err(Error::NonIntegralDivisor);
    }
    let data = cartier_data(f, d)?;
    let cartier = data.iter().all(|c| c.integral);
    Ok((cartier, data))
}

/// Least positive integer `t` such that `t * d` has integer coefficients
/// and is Cartier. Always exists on valid simplicial fans.
pub fn cartier_multiple(f: &Fan, d: &TDivisor) -> Result<Int> {
    if !f.is_simplicial()? {
        return Err(Error::NotSimplicial);
    }
    let mut t = Int::one();
    for c in d.coeffs() {
        t = t.lcm(c.denom());
    }
    for data in cartier_data(f, d)? {
        for x in &data.m {
            t = t.lcm(x.denom());
        }
    }
    Ok(t)
}

/// Ample test: the divisor class must be in the relative interior of the
/// nef cone, and the nef cone must be full-dimensional (otherwise no ample
/// class exists at all).
pub fn is_ample(f: &Fan, q: &WeightMatrix, d: &TDivisor) -> Result<bool> {
    let nef = gkz::nef_cone(f, q)?;
    if nef.dim() != q.rank() {
        return Ok(false);
    }
    let class = divisor_class(q, d)?;
    Ok(nef.contains(class.as_point()) == Membership::Interior)
}
