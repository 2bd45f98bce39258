//! Fans as combinatorial objects over a fan matrix: validation,
//! completeness and simpliciality tests, triangulation of non-simplicial
//! cones on their own rays, and enumeration of all simplicial subdivisions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;

use num_traits::Zero;

use crate::cone::{Cone, Membership};
use crate::error::{Error, Result};
use crate::linalg::{self, content, dot, IMatrix, Int};

/// A fan: primitive ray generators as matrix columns plus maximal cones as
/// sorted index sets into those columns. Maximal cones are required to be
/// full-dimensional (pure fans), matching the complete setting.
#[derive(Clone, Debug)]
pub struct Fan {
    fan_matrix: IMatrix,
    max_cones: Vec<Vec<usize>>,
    validation: OnceLock<ValidationReport>,
    complete: OnceLock<bool>,
    simplicial: OnceLock<bool>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.fan_matrix == other.fan_matrix && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

/// One validity violation; violations are data, not exceptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Stable machine-readable code.
    pub code: &'static str,
    pub message: String,
    /// Indices of the max cones involved (empty for ray-level violations).
    pub cones: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The walls a subdivision introduces: codimension-one faces of the child
/// that are not faces of the parent. Each is one exceptional curve of the
/// induced small birational morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionReport {
    pub parent: Fan,
    pub child: Fan,
    pub added_walls: Vec<Vec<usize>>,
}

impl Fan {
    /// Index sets are sorted and the cone list is sorted; duplicates are
    /// kept so that `validate` can flag them.
    pub fn new(fan_matrix: IMatrix, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        let m = fan_matrix.cols();
        let mut cones = Vec::with_capacity(max_cones.len());
        for mut c in max_cones {
            for &i in &c {
                if i >= m {
                    return Err(Error::IndexOutOfRange(format!(
                        "max cone references ray {i}, but the fan matrix has {m} columns"
                    )));
                }
            }
            c.sort_unstable();
            cones.push(c);
        }
        cones.sort();
        Ok(Fan {
            fan_matrix,
            max_cones: cones,
            validation: OnceLock::new(),
            complete: OnceLock::new(),
            simplicial: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.fan_matrix.rows()
    }

    pub fn ray_count(&self) -> usize {
        self.fan_matrix.cols()
    }

    pub fn fan_matrix(&self) -> &IMatrix {
        &self.fan_matrix
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn ray(&self, i: usize) -> Vec<Int> {
        self.fan_matrix.col(i)
    }

    /// Geometric cone spanned by the given ray indices.
    pub fn cone_of(&self, indices: &[usize]) -> Result<Cone> {
        let gens: Vec<Vec<Int>> = indices.iter().map(|&i| self.ray(i)).collect();
        Cone::from_generators(self.dim(), &gens)
    }

    pub fn cone(&self, cone_index: usize) -> Result<Cone> {
        let Some(indices) = self.max_cones.get(cone_index) else {
            return Err(Error::IndexOutOfRange(format!(
                "cone index {cone_index} out of range ({} cones)",
                self.max_cones.len()
            )));
        };
        self.cone_of(indices)
    }

    /// Full validity check; every violation is reported with indices.
    pub fn validate(&self) -> &ValidationReport {
        self.validation.get_or_init(|| self.run_validation())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    fn require_valid(&self) -> Result<()> {
        match self.validate().violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidFan(format!("{} ({})", v.message, v.code))),
        }
    }

    fn run_validation(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.dim();
        let m = self.ray_count();

        for j in 0..m {
            let col = self.fan_matrix.col(j);
            let c = content(&col);
            if c.is_zero() {
                violations.push(Violation {
                    code: "zero-ray",
                    message: format!("ray {} is the zero vector", j + 1),
                    cones: vec![],
                });
            } else if c != Int::from(1) {
                violations.push(Violation {
                    code: "nonprimitive-ray",
                    message: format!("ray {} is not primitive", j + 1),
                    cones: vec![],
                });
            }
        }
        for j in 0..m {
            for k in j + 1..m {
                if self.fan_matrix.col(j) == self.fan_matrix.col(k) {
                    violations.push(Violation {
                        code: "duplicate-ray",
                        message: format!("rays {} and {} coincide", j + 1, k + 1),
                        cones: vec![],
                    });
                }
            }
        }
        let mut used = vec![false; m];
        for c in &self.max_cones {
            for &i in c {
                used[i] = true;
            }
        }
        for (j, u) in used.iter().enumerate() {
            if !u {
                violations.push(Violation {
                    code: "unused-ray",
                    message: format!("ray {} appears in no maximal cone", j + 1),
                    cones: vec![],
                });
            }
        }
        if !violations.is_empty() {
            // Ray-level defects poison every geometric check below.
            return ValidationReport { violations };
        }

        let mut cones: Vec<Option<Cone>> = Vec::with_capacity(self.max_cones.len());
        for (ci, indices) in self.max_cones.iter().enumerate() {
            if indices.windows(2).any(|w| w[0] == w[1]) {
                violations.push(Violation {
                    code: "repeated-index",
                    message: format!("cone {} lists a ray twice", ci + 1),
                    cones: vec![ci],
                });
                cones.push(None);
                continue;
            }
            let cone = self.cone_of(indices).expect("indices in range");
            if !cone.is_pointed() {
                violations.push(Violation {
                    code: "not-pointed",
                    message: format!("cone {} is not pointed", ci + 1),
                    cones: vec![ci],
                });
            }
            if cone.dim() != n {
                violations.push(Violation {
                    code: "not-full-dimensional",
                    message: format!(
                        "cone {} has dimension {}, expected {}",
                        ci + 1,
                        cone.dim(),
                        n
                    ),
                    cones: vec![ci],
                });
            }
            if cone.is_pointed() && cone.rays().len() != indices.len() {
                violations.push(Violation {
                    code: "redundant-ray-index",
                    message: format!(
                        "cone {} lists a ray that is not one of its extremal rays",
                        ci + 1
                    ),
                    cones: vec![ci],
                });
            }
            cones.push(Some(cone));
        }

        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                let (Some(a), Some(b)) = (&cones[i], &cones[j]) else {
                    continue;
                };
                let Ok(w) = a.intersect(b) else { continue };
                if !(w.is_face_of(a) && w.is_face_of(b)) {
                    violations.push(Violation {
                        code: "improper-intersection",
                        message: format!(
                            "cones {} and {} do not intersect in a common face",
                            i + 1,
                            j + 1
                        ),
                        cones: vec![i, j],
                    });
                } else if w == *a || w == *b {
                    violations.push(Violation {
                        code: "redundant-cone",
                        message: format!("cone {} is contained in cone {}", i + 1, j + 1),
                        cones: vec![i, j],
                    });
                }
            }
        }

        ValidationReport { violations }
    }

    /// Whether every maximal cone is simplicial (generators independent).
    pub fn is_simplicial(&self) -> Result<bool> {
        self.require_valid()?;
        Ok(*self.simplicial.get_or_init(|| {
            self.max_cones.iter().all(|c| {
                c.len() == self.dim() && linalg::rank(&self.fan_matrix.select_cols(c)) == self.dim()
            })
        }))
    }

    /// Ray index sets of the geometric facets of one maximal cone, one per
    /// facet normal.
    fn facet_keys_of(&self, indices: &[usize]) -> Result<Vec<Vec<usize>>> {
        let cone = self.cone_of(indices)?;
        let mut keys = Vec::with_capacity(cone.facets().len());
        for normal in cone.facets() {
            let key: Vec<usize> = indices
                .iter()
                .copied()
                .filter(|&i| dot(normal, &self.ray(i)).is_zero())
                .collect();
            keys.push(key);
        }
        Ok(keys)
    }

    /// Completeness via facet pairing: every facet of every maximal cone is
    /// shared with exactly one other maximal cone, and the facet-adjacency
    /// graph is connected. A pure fan with proper intersections that pairs
    /// perfectly has boundaryless support, hence support = R^n.
    pub fn is_complete(&self) -> Result<bool> {
        self.require_valid()?;
        if let Some(&v) = self.complete.get() {
            return Ok(v);
        }
        let v = self.compute_complete()?;
        Ok(*self.complete.get_or_init(|| v))
    }

    fn compute_complete(&self) -> Result<bool> {
        if self.max_cones.is_empty() {
            return Ok(false);
        }
        let mut facet_map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, indices) in self.max_cones.iter().enumerate() {
            for key in self.facet_keys_of(indices)? {
                facet_map.entry(key).or_default().push(ci);
            }
        }
        if facet_map.values().any(|cs| cs.len() != 2) {
            return Ok(false);
        }
        // Connectivity of the facet-adjacency graph.
        let mut seen = vec![false; self.max_cones.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.max_cones.len()];
        for cs in facet_map.values() {
            adjacency[cs[0]].push(cs[1]);
            adjacency[cs[1]].push(cs[0]);
        }
        while let Some(c) = stack.pop() {
            for &d in &adjacency[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        Ok(seen.iter().all(|&s| s))
    }

    /// All subdivisions of one full-dimensional maximal cone into simplicial
    /// cones on its own rays, as lists of n-element index sets.
    ///
    /// Exhaustive recursive extension: seed with any candidate simplex
    /// containing the cone's relative interior point, extend across
    /// unmatched internal facets, backtrack, and dedupe by canonical sorted
    /// form.
    pub fn triangulations_of_cone(&self, cone_index: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        self.require_valid()?;
        let Some(indices) = self.max_cones.get(cone_index) else {
            return Err(Error::IndexOutOfRange(format!(
                "cone index {cone_index} out of range ({} cones)",
                self.max_cones.len()
            )));
        };
        let n = self.dim();
        if indices.len() == n {
            return Ok(vec![vec![indices.clone()]]);
        }
        let sigma = self.cone_of(indices)?;

        // Candidate simplices: independent n-subsets whose cone traps no
        // other ray of sigma (such a piece could never sit in a valid
        // triangulation next to the piece using that ray).
        let mut cands: Vec<Vec<usize>> = Vec::new();
        let mut cand_cones: Vec<Cone> = Vec::new();
        for subset in indices.iter().copied().combinations(n) {
            if linalg::rank(&self.fan_matrix.select_cols(&subset)) != n {
                continue;
            }
            let cone = self.cone_of(&subset)?;
            let traps_foreign_ray = indices
                .iter()
                .filter(|i| !subset.contains(i))
                .any(|&i| cone.contains_int(&self.ray(i)) != Membership::Outside);
            if traps_foreign_ray {
                continue;
            }
            cands.push(subset);
            cand_cones.push(cone);
        }

        let k = cands.len();
        let mut compatible = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let w = cand_cones[i].intersect(&cand_cones[j])?;
                let ok = w.is_face_of(&cand_cones[i])
                    && w.is_face_of(&cand_cones[j])
                    && w != cand_cones[i];
                compatible[i][j] = ok;
                compatible[j][i] = ok;
            }
        }

        // A facet of a piece is on the boundary of sigma iff one of sigma's
        // facet normals vanishes on all of its rays.
        let on_boundary = |facet: &[usize]| -> bool {
            sigma
                .facets()
                .iter()
                .any(|normal| facet.iter().all(|&i| dot(normal, &self.ray(i)).is_zero()))
        };
        let piece_facets: Vec<Vec<Vec<usize>>> = cands
            .iter()
            .map(|s| {
                s.iter()
                    .copied()
                    .combinations(n - 1)
                    .filter(|f| !on_boundary(f))
                    .collect()
            })
            .collect();

        let interior = sigma.relint_point()?;
        let seeds: Vec<usize> = (0..k)
            .filter(|&i| cand_cones[i].contains(&interior) != Membership::Outside)
            .collect();

        let mut found: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        for &seed in &seeds {
            let mut chosen = vec![seed];
            let mut open: BTreeSet<Vec<usize>> = piece_facets[seed].iter().cloned().collect();
            extend_triangulation(
                &mut chosen,
                &mut open,
                &cands,
                &piece_facets,
                &compatible,
                &mut found,
            );
        }
        Ok(found.into_iter().collect())
    }

    /// All simplicial fans obtained by independently triangulating each
    /// non-simplicial maximal cone (cartesian product, odometer order over
    /// the canonically ordered per-cone triangulations). The ray set never
    /// changes, so each result is a small modification candidate.
    pub fn simplicial_subdivisions(&self) -> Result<Vec<Fan>> {
        self.require_valid()?;
        if !self.is_complete()? {
            return Err(Error::NotComplete);
        }
        if self.is_simplicial()? {
            return Ok(vec![self.clone()]);
        }
        let n = self.dim();
        let nonsimp: Vec<usize> = (0..self.max_cones.len())
            .filter(|&i| self.max_cones[i].len() != n)
            .collect();
        let choices: Vec<Vec<Vec<Vec<usize>>>> = nonsimp
            .par_iter()
            .map(|&i| self.triangulations_of_cone(i))
            .collect::<Result<_>>()?;

        let fixed: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .filter(|c| c.len() == n)
            .cloned()
            .collect();

        let mut out = Vec::new();
        let mut odometer = vec![0usize; nonsimp.len()];
        loop {
            let mut cones = fixed.clone();
            for (slot, &pick) in odometer.iter().enumerate() {
                cones.extend(choices[slot][pick].iter().cloned());
            }
            out.push(Fan::new(self.fan_matrix.clone(), cones)?);

            let mut slot = odometer.len();
            loop {
                if slot == 0 {
                    return Ok(out);
                }
                slot -= 1;
                odometer[slot] += 1;
                if odometer[slot] < choices[slot].len() {
                    break;
                }
                odometer[slot] = 0;
            }
        }
    }

    /// All codimension-one faces of all maximal cones, as ray index sets.
    fn wall_set(&self) -> Result<BTreeSet<Vec<usize>>> {
        let mut walls = BTreeSet::new();
        for indices in &self.max_cones {
            for key in self.facet_keys_of(indices)? {
                walls.insert(key);
            }
        }
        Ok(walls)
    }
}

fn extend_triangulation(
    chosen: &mut Vec<usize>,
    open: &mut BTreeSet<Vec<usize>>,
    cands: &[Vec<usize>],
    piece_facets: &[Vec<Vec<usize>>],
    compatible: &[Vec<bool>],
    found: &mut BTreeSet<Vec<Vec<usize>>>,
) {
    let Some(facet) = open.iter().next().cloned() else {
        let mut tri: Vec<Vec<usize>> = chosen.iter().map(|&i| cands[i].clone()).collect();
        tri.sort();
        found.insert(tri);
        return;
    };
    for next in 0..cands.len() {
        if chosen.contains(&next)
            || !piece_facets[next].contains(&facet)
            || !chosen.iter().all(|&c| compatible[c][next])
        {
            continue;
        }
        let mut toggled: Vec<(Vec<usize>, bool)> = Vec::new();
        for f in &piece_facets[next] {
            if open.remove(f) {
                toggled.push((f.clone(), true));
            } else {
                open.insert(f.clone());
                toggled.push((f.clone(), false));
            }
        }
        chosen.push(next);
        extend_triangulation(chosen, open, cands, piece_facets, compatible, found);
        chosen.pop();
        for (f, was_open) in toggled {
            if was_open {
                open.insert(f);
            } else {
                open.remove(&f);
            }
        }
    }
}

/// The codimension-one faces present in the child but not in the parent.
/// Their count is the number of exceptional curves of the induced small
/// morphism.
pub fn added_walls(parent: &Fan, child: &Fan) -> Result<SubdivisionReport> {
    if parent.fan_matrix() != child.fan_matrix() {
        return Err(Error::RaySetMismatch(
            "parent and child must share one fan matrix".into(),
        ));
    }
    // Refinement check: every child cone sits inside some parent cone.
    for indices in child.max_cones() {
        let cone = child.cone_of(indices)?;
        let inside = parent.max_cones().iter().any(|p| {
            parent
                .cone_of(p)
                .map(|pc| cone.is_subset_of(&pc))
                .unwrap_or(false)
        });
        if !inside {
            return Err(Error::NotRefinement(format!(
                "child cone {:?} lies in no parent cone",
                indices.iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
    }
    let parent_walls = parent.wall_set()?;
    let child_walls = child.wall_set()?;
    let added: Vec<Vec<usize>> = child_walls.difference(&parent_walls).cloned().collect();
    Ok(SubdivisionReport {
        parent: parent.clone(),
        child: child.clone(),
        added_walls: added,
    })
}
