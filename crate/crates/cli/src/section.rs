//! Plot-ready figure data for rank-3 weight matrices: every chamber, plus
//! the moving and effective cone outlines and the anti-canonical class,
//! sliced with the plane `x1 + x2 + x3 = 1` and written in `(x1, x2)`
//! coordinates as exact rationals.

use serde_json::{json, Value};

use toricflip_core::gkz::{self, SecondaryFan, WeightMatrix};
use toricflip_core::json::rat_to_string;
use toricflip_core::{Cone, Error, Int, Rat, Result};

use num_traits::{Signed, Zero};
use std::cmp::Ordering;

pub struct SectionPolygon {
    pub label: String,
    /// Ordered counterclockwise around the polygon.
    pub vertices: Vec<(Rat, Rat)>,
}

pub struct SectionData {
    pub polygons: Vec<SectionPolygon>,
}

fn slice_ray(r: &[Int]) -> Result<(Rat, Rat)> {
    let total: Int = r.iter().sum();
    if !total.is_positive() {
        return Err(Error::DegenerateWeights(format!(
            "ray {r:?} has nonpositive coordinate sum and misses the slice plane"
        )));
    }
    let total = Rat::from(total);
    Ok((
        Rat::from(r[0].clone()) / &total,
        Rat::from(r[1].clone()) / &total,
    ))
}

/// Counterclockwise order around the centroid, with exact comparisons.
fn order_polygon(mut pts: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    if pts.len() < 3 {
        pts.sort();
        return pts;
    }
    let n = Rat::from(Int::from(pts.len() as i64));
    let cx: Rat = pts.iter().map(|p| p.0.clone()).sum::<Rat>() / &n;
    let cy: Rat = pts.iter().map(|p| p.1.clone()).sum::<Rat>() / &n;
    let half = |p: &(Rat, Rat)| -> u8 {
        let dy = &p.1 - &cy;
        let dx = &p.0 - &cx;
        if dy.is_positive() || (dy.is_zero() && !dx.is_negative()) {
            0
        } else {
            1
        }
    };
    pts.sort_by(|a, b| {
        half(a).cmp(&half(b)).then_with(|| {
            let cross = (&a.0 - &cx) * (&b.1 - &cy) - (&a.1 - &cy) * (&b.0 - &cx);
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    pts
}

fn polygon_of(label: &str, cone: &Cone) -> Result<SectionPolygon> {
    let vertices = cone
        .rays()
        .iter()
        .map(|r| slice_ray(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(SectionPolygon {
        label: label.to_string(),
        vertices: order_polygon(vertices),
    })
}

/// Sections of the effective cone, moving cone, every chamber, and the
/// anti-canonical point.
pub fn emit_section(q: &WeightMatrix, sf: &SecondaryFan) -> Result<SectionData> {
    let mut polygons = vec![
        polygon_of("Eff", &gkz::effective_cone(q))?,
        polygon_of("Mov", &sf.mov)?,
    ];
    for (i, chamber) in sf.chambers.iter().enumerate() {
        polygons.push(polygon_of(&format!("chamber {}", i + 1), &chamber.cone)?);
    }
    let k = gkz::anticanonical_vector(q);
    polygons.push(SectionPolygon {
        label: "-K".to_string(),
        vertices: vec![slice_ray(&k)?],
    });
    Ok(SectionData { polygons })
}

pub fn section_to_value(data: &SectionData) -> Value {
    json!({
        "plane": "sum=1",
        "polygons": data
            .polygons
            .iter()
            .map(|p| {
                json!({
                    "label": p.label,
                    "vertices": p
                        .vertices
                        .iter()
                        .map(|(x, y)| json!([rat_to_string(x), rat_to_string(y)]))
                        .collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}
