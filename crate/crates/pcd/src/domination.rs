//! Minimum dominating sets of proximity catch digraphs.
//!
//! The proportional-edge digraphs make exact minimization tractable: in
//! each Delaunay cell the candidate prototypes collapse to at most `d+1`
//! local extrema (one per vertex region, minimizing that region's
//! barycentric coordinate), and in each outer simplex the single point
//! farthest from the hull facet dominates everything there. The greedy
//! set-cover heuristic handles the spherical digraphs, and a subset
//! enumeration oracle keeps everyone honest on small instances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data;
use crate::error::{Error, Result};
use crate::eval::overlap_shift;
use crate::geometry::{delaunay_tessellate, Point, Tessellation, TessellationParams};
use crate::proximity::{
    build_cccd, locate_targets, pe_contains_inner, pe_region_inner, pe_region_outer, BallRegion,
    Digraph, InnerPERegion, OuterPERegion, TargetSite,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How a prototype earned its place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    InnerExact,
    OuterExact,
    OuterGreedy,
}

/// The region attached to a prototype.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum RegionHandle {
    Inner(InnerPERegion),
    Outer(OuterPERegion),
    Ball(BallRegion),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prototype {
    /// Index into the target point slice.
    pub target_id: usize,
    pub region: RegionHandle,
    pub provenance: Provenance,
}

/// A dominating set of target points with their regions.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PrototypeSet {
    pub prototypes: Vec<Prototype>,
    /// `(cell, gamma)` for every cell that held targets.
    pub per_cell_gamma: Vec<(usize, usize)>,
    /// `(outer, gamma)` for every outer simplex that held targets.
    pub per_outer_gamma: Vec<(usize, usize)>,
}

impl PrototypeSet {
    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }

    pub fn target_ids(&self) -> Vec<usize> {
        self.prototypes.iter().map(|p| p.target_id).collect()
    }

    /// `1 - |S| / n`, undefined for an empty target class.
    pub fn reduction(&self, n_targets: usize) -> Option<f64> {
        (n_targets > 0).then(|| 1.0 - self.len() as f64 / n_targets as f64)
    }

    fn merge(&mut self, other: PrototypeSet) {
        self.prototypes.extend(other.prototypes);
        self.per_cell_gamma.extend(other.per_cell_gamma);
        self.per_outer_gamma.extend(other.per_outer_gamma);
    }
}

/// Greedy approximate minimum dominating set: repeatedly take the vertex
/// covering the most still-uncovered vertices (itself included) in the
/// digraph induced by the uncovered set; ties go to the lowest index.
pub fn greedy_mds(digraph: &Digraph) -> Vec<usize> {
    let n = digraph.n();
    let mut uncovered = vec![true; n];
    let mut remaining = n;
    let mut selected = Vec::new();
    while remaining > 0 {
        let mut best = usize::MAX;
        let mut best_gain = 0usize;
        for v in 0..n {
            if !uncovered[v] {
                continue; // candidates come from the induced subdigraph
            }
            let gain = 1 + digraph.arcs[v].iter().filter(|&&u| uncovered[u]).count();
            if gain > best_gain {
                best = v;
                best_gain = gain;
            }
        }
        debug_assert!(best != usize::MAX);
        selected.push(best);
        uncovered[best] = false;
        remaining -= 1;
        for &u in &digraph.arcs[best] {
            if uncovered[u] {
                uncovered[u] = false;
                remaining -= 1;
            }
        }
    }
    selected.sort_unstable();
    selected
}

/// Exact minimum dominating set of the targets inside one cell.
///
/// `members` holds `(target_id, barycentric coordinates)` of every target
/// located in the cell. The local extremum of each non-empty vertex
/// region (the member minimizing that region's coordinate, lowest id on
/// ties) is the only candidate the search needs; subsets of extrema are
/// tried in increasing cardinality, lexicographically within each size.
pub fn exact_mds_cell(
    tess: &Tessellation,
    cell: usize,
    members: &[(usize, crate::geometry::BaryCoords)],
    r: f64,
) -> PrototypeSet {
    if members.is_empty() {
        return PrototypeSet::default();
    }
    let tol = tess.tol;
    let d = tess.dim();

    // Local extremum per vertex region.
    let mut extremum: Vec<Option<usize>> = vec![None; d + 1]; // index into members
    for (mi, (_, w)) in members.iter().enumerate() {
        let m = crate::geometry::uniform_center(d);
        let Ok(region) = crate::geometry::vertex_region(&m, w, tol) else {
            continue;
        };
        match extremum[region] {
            None => extremum[region] = Some(mi),
            Some(cur) => {
                let (cur_id, cur_w) = &members[cur];
                let (new_id, new_w) = &members[mi];
                let better = new_w.w[region] < cur_w.w[region]
                    || (new_w.w[region] == cur_w.w[region] && new_id < cur_id);
                if better {
                    extremum[region] = Some(mi);
                }
            }
        }
    }

    let candidates: Vec<(usize, usize)> = extremum
        .iter()
        .enumerate()
        .filter_map(|(v, m)| m.map(|mi| (v, mi)))
        .collect();
    debug_assert!(!candidates.is_empty());

    let regions: Vec<InnerPERegion> = candidates
        .iter()
        .map(|&(_, mi)| {
            pe_region_inner(tess, cell, &members[mi].1, r)
                .expect("extremum located in its own cell")
        })
        .collect();

    for t in 1..=candidates.len() {
        let mut combo = FixedCombinations::new(candidates.len(), t);
        while let Some(chosen) = combo.next() {
            let covers = members.iter().all(|(_, w)| {
                chosen
                    .iter()
                    .any(|&ci| pe_contains_inner(&regions[ci], w, tol))
            });
            if covers {
                let prototypes = chosen
                    .iter()
                    .map(|&ci| Prototype {
                        target_id: members[candidates[ci].1].0,
                        region: RegionHandle::Inner(regions[ci].clone()),
                        provenance: Provenance::InnerExact,
                    })
                    .collect();
                return PrototypeSet {
                    prototypes,
                    per_cell_gamma: vec![(cell, t)],
                    per_outer_gamma: Vec::new(),
                };
            }
        }
    }
    unreachable!("the full extremum set always dominates its cell");
}

/// Exact minimum dominating set of all targets inside the hull: the
/// per-cell solutions are independent, so they run in parallel and merge
/// in cell order. Targets outside the hull are ignored here.
pub fn exact_mds_hull(targets: &[Point], tess: &Tessellation, r: f64) -> PrototypeSet {
    let sites = locate_targets(targets, tess);
    exact_mds_hull_from_sites(&sites, tess, r)
}

pub fn exact_mds_hull_from_sites(
    sites: &[TargetSite],
    tess: &Tessellation,
    r: f64,
) -> PrototypeSet {
    let mut by_cell: Vec<Vec<(usize, crate::geometry::BaryCoords)>> =
        vec![Vec::new(); tess.cell_count()];
    for (id, site) in sites.iter().enumerate() {
        if let TargetSite::Cell { cell, w } = site {
            by_cell[*cell].push((id, w.clone()));
        }
    }
    let solved: Vec<PrototypeSet> = by_cell
        .par_iter()
        .enumerate()
        .filter(|(_, members)| !members.is_empty())
        .map(|(cell, members)| exact_mds_cell(tess, cell, members, r))
        .collect();
    let mut out = PrototypeSet::default();
    for part in solved {
        out.merge(part);
    }
    out
}

/// Exact minimum dominating set of the whole target class: per-cell
/// solutions inside the hull, plus the farthest-from-facet point of each
/// occupied outer simplex (one prototype each, by construction).
pub fn standard_mds(targets: &[Point], tess: &Tessellation, r: f64) -> PrototypeSet {
    let sites = locate_targets(targets, tess);
    let mut out = exact_mds_hull_from_sites(&sites, tess, r);

    let mut by_outer: Vec<Vec<(usize, &crate::geometry::ConeCoords)>> =
        vec![Vec::new(); tess.outer_count()];
    for (id, site) in sites.iter().enumerate() {
        if let TargetSite::Outer { outer, c } = site {
            by_outer[*outer].push((id, c));
        }
    }
    for (outer, members) in by_outer.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        // The cone-coordinate sum is an affine proxy for the facet
        // distance, so the argmax is the local extremum.
        let mut best = 0usize;
        for (mi, (id, c)) in members.iter().enumerate() {
            let (bid, bc) = &members[best];
            if c.sum() > bc.sum() || (c.sum() == bc.sum() && id < bid) {
                best = mi;
            }
        }
        let (id, c) = members[best];
        let region =
            pe_region_outer(tess, outer, c, r).expect("extremum located in its own outer simplex");
        out.prototypes.push(Prototype {
            target_id: id,
            region: RegionHandle::Outer(region),
            provenance: Provenance::OuterExact,
        });
        out.per_outer_gamma.push((outer, 1));
    }
    out
}

/// Composite dominating set: exact inside the hull, greedy spherical
/// (CCCD) outside it. The spherical digraph is built over the outside
/// targets against the full non-target set.
pub fn composite_mds(
    targets: &[Point],
    nontargets: &[Point],
    tess: &Tessellation,
    r: f64,
    theta: f64,
) -> Result<PrototypeSet> {
    let sites = locate_targets(targets, tess);
    let mut out = exact_mds_hull_from_sites(&sites, tess, r);

    let outside_ids: Vec<usize> = sites
        .iter()
        .enumerate()
        .filter(|(_, s)| !matches!(s, TargetSite::Cell { .. }))
        .map(|(id, _)| id)
        .collect();
    if outside_ids.is_empty() {
        return Ok(out);
    }
    let outside: Vec<Point> = outside_ids.iter().map(|&i| targets[i].clone()).collect();
    let (digraph, radii) = build_cccd(&outside, nontargets, theta)?;
    for local in greedy_mds(&digraph) {
        out.prototypes.push(Prototype {
            target_id: outside_ids[local],
            region: RegionHandle::Ball(BallRegion {
                center: outside[local].clone(),
                radius: radii[local],
                theta,
            }),
            provenance: Provenance::OuterGreedy,
        });
    }
    Ok(out)
}

/// True minimum dominating set by increasing-cardinality subset search,
/// decomposed over weakly connected components. Ties resolve to the
/// lexicographically smallest vertex set. Guarded to 25 vertices.
pub fn brute_force_mds(digraph: &Digraph) -> Result<Vec<usize>> {
    const CAP: usize = 25;
    let n = digraph.n();
    if n > CAP {
        return Err(Error::TooLarge { n, cap: CAP });
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // Weakly connected components; domination never crosses them.
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = n_comp;
        while let Some(u) = stack.pop() {
            for &v in &digraph.arcs[u] {
                if comp[v] == usize::MAX {
                    comp[v] = n_comp;
                    stack.push(v);
                }
            }
            // arcs are directed; sweep in-neighbors too
            for w in 0..n {
                if comp[w] == usize::MAX && digraph.has_arc(w, u) {
                    comp[w] = n_comp;
                    stack.push(w);
                }
            }
        }
        n_comp += 1;
    }

    let mut result = Vec::new();
    for c in 0..n_comp {
        let verts: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
        result.extend(brute_force_component(digraph, &verts));
    }
    result.sort_unstable();
    Ok(result)
}

fn brute_force_component(digraph: &Digraph, verts: &[usize]) -> Vec<usize> {
    let k = verts.len();
    let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    // Closed out-neighborhood masks in component-local indexing.
    let masks: Vec<u32> = verts
        .iter()
        .map(|&v| {
            let mut m = 0u32;
            for (li, &u) in verts.iter().enumerate() {
                if u == v || digraph.has_arc(v, u) {
                    m |= 1 << li;
                }
            }
            m
        })
        .collect();
    for t in 1..=k {
        let mut combo = FixedCombinations::new(k, t);
        while let Some(chosen) = combo.next() {
            let mut cover = 0u32;
            for &ci in chosen {
                cover |= masks[ci];
            }
            if cover == full {
                return chosen.iter().map(|&ci| verts[ci]).collect();
            }
        }
    }
    unreachable!("the full vertex set dominates itself");
}

/// Lexicographic `t`-combinations of `0..n` without allocation churn.
struct FixedCombinations {
    n: usize,
    idx: Vec<usize>,
    fresh: bool,
}

impl FixedCombinations {
    fn new(n: usize, t: usize) -> Self {
        FixedCombinations {
            n,
            idx: (0..t).collect(),
            fresh: true,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        let t = self.idx.len();
        if t > self.n {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(&self.idx);
        }
        let mut k = t;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if self.idx[k] != k + self.n - t {
                self.idx[k] += 1;
                for j in k + 1..t {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
    }
}

/// True when `set` dominates the digraph: every vertex is in the closed
/// out-neighborhood of some selected vertex.
pub fn dominates(digraph: &Digraph, set: &[usize]) -> bool {
    let n = digraph.n();
    let mut covered = vec![false; n];
    for &s in set {
        covered[s] = true;
        for &u in &digraph.arcs[s] {
            covered[u] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

// ---------------------------------------------------------------------
// Domination statistics over Monte Carlo replicates.
// ---------------------------------------------------------------------

/// Monte Carlo settings for [`domination_statistics`].
#[derive(Clone, Debug)]
pub enum DomSetting {
    /// Uniform targets inside a fixed simplex (its own tessellation).
    FixedSimplex {
        vertices: Vec<Point>,
        n_targets: usize,
    },
    /// The two-class overlap setting; the majority class (class 0) is
    /// reduced against the tessellation of the minority class.
    Overlap {
        d: usize,
        zeta: f64,
        q: f64,
        n0: usize,
    },
}

#[derive(Clone, Debug)]
pub struct DominationRuns {
    pub setting: DomSetting,
    pub r: f64,
    pub replicates: usize,
    pub seed: u64,
}

/// Aggregated domination numbers and reduction percentages.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DominationStats {
    /// Pooled per-cell domination numbers across replicates.
    pub per_cell_gamma: Vec<usize>,
    /// Pooled per-outer-simplex domination numbers.
    pub per_outer_gamma: Vec<usize>,
    /// Prototype-set size per replicate.
    pub sizes: Vec<usize>,
    /// `1 - |S| / n` per replicate; `None` when the class was empty.
    pub reductions: Vec<Option<f64>>,
}

impl DominationStats {
    /// Empirical `P(gamma <= t)` over the pooled per-cell values.
    pub fn gamma_cdf(&self, t: usize) -> f64 {
        if self.per_cell_gamma.is_empty() {
            return f64::NAN;
        }
        let hits = self.per_cell_gamma.iter().filter(|&&g| g <= t).count();
        hits as f64 / self.per_cell_gamma.len() as f64
    }

    pub fn mean_reduction(&self) -> Option<f64> {
        let vals: Vec<f64> = self.reductions.iter().filter_map(|r| *r).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    pub fn se_reduction(&self) -> Option<f64> {
        let vals: Vec<f64> = self.reductions.iter().filter_map(|r| *r).collect();
        if vals.len() < 2 {
            return None;
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var =
            vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (vals.len() - 1) as f64;
        Some((var / vals.len() as f64).sqrt())
    }
}

/// Runs replicated MDS constructions and aggregates domination numbers
/// and reductions. Replicates are independent with derived seeds and
/// reduce in replicate order.
pub fn domination_statistics(runs: &DominationRuns) -> Result<DominationStats> {
    let per_replicate: Vec<Result<(PrototypeSet, usize)>> = (0..runs.replicates)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(runs.seed, rep as u64));
            match &runs.setting {
                DomSetting::FixedSimplex {
                    vertices,
                    n_targets,
                } => {
                    let tess = delaunay_tessellate(vertices, &TessellationParams::default())?;
                    let targets: Vec<Point> = (0..*n_targets)
                        .map(|_| data::sample_simplex(&mut rng, vertices))
                        .collect();
                    let set = standard_mds(&targets, &tess, runs.r);
                    Ok((set, targets.len()))
                }
                DomSetting::Overlap { d, zeta, q, n0 } => {
                    let nu = overlap_shift(*zeta, *d);
                    let n1 = ((*q * *n0 as f64).round() as usize).max(*d + 1);
                    let (x0, x1) = data::sample_overlap_pair(&mut rng, *d, nu, *n0, n1);
                    let tess = delaunay_tessellate(&x1, &TessellationParams::default())?;
                    let set = standard_mds(&x0, &tess, runs.r);
                    Ok((set, x0.len()))
                }
            }
        })
        .collect();

    let mut stats = DominationStats::default();
    for item in per_replicate {
        let (set, n) = item?;
        stats
            .per_cell_gamma
            .extend(set.per_cell_gamma.iter().map(|&(_, g)| g));
        stats
            .per_outer_gamma
            .extend(set.per_outer_gamma.iter().map(|&(_, g)| g));
        stats.sizes.push(set.len());
        stats.reductions.push(set.reduction(n));
    }
    Ok(stats)
}
