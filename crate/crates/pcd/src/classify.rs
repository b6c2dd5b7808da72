//! Class covers and the classifiers built on them.
//!
//! A cover is a union of prototype regions containing every training
//! point of its class and no point of any other class in its interior.
//! Covers come in three kinds: *standard* (proportional-edge regions
//! everywhere, exact minimum prototype set), *composite*
//! (proportional-edge inside the hull of the complement class, balls
//! outside, approximately minimum) and *spherical* (balls everywhere,
//! greedy). Classification compares convex distances to covers:
//!
//! * the pre-classifier decides only inside the in-hull covers and
//!   otherwise reports no decision;
//! * hybrid classifiers forward undecided points to an alternative
//!   (kNN or the spherical-cover rule);
//! * cover classifiers assign the class of the nearest cover outright.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::domination::{composite_mds, greedy_mds, standard_mds, Provenance, RegionHandle};
use crate::error::{Error, Result};
use crate::geometry::{
    centroid, delaunay_tessellate, HalfSpace, Point, Polytope, SimplexCoords, Tessellation,
    TessellationParams,
};
use crate::proximity::{build_cccd, BallRegion};

/// Which family of regions a cover uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverKind {
    Standard,
    Composite,
    Spherical,
}

impl std::fmt::Display for CoverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverKind::Standard => write!(f, "standard"),
            CoverKind::Composite => write!(f, "composite"),
            CoverKind::Spherical => write!(f, "spherical"),
        }
    }
}

/// Serialized form of a region: geometry only, caches rebuilt on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum RegionSpec {
    Simplex { vertices: Vec<Point> },
    Prism { polytope: Polytope },
    Ball { region: BallRegion },
}

/// A cover region with whatever cached structure its dissimilarity
/// needs. Serializes through [`RegionSpec`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RegionSpec", into = "RegionSpec")]
pub enum Region {
    /// Simplex-shaped region; convex distance from its centroid.
    Simplex(SimplexCoords),
    /// Truncated-prism region of an outer simplex; generic ray clipping
    /// from the designated center.
    Prism(Polytope),
    /// Ball; distance scaled by the radius.
    Ball(BallRegion),
}

impl Region {
    /// Convex distance of `z` from this region: 0 at the designated
    /// center, below 1 strictly inside, 1 on the boundary.
    pub fn dissimilarity(&self, z: &Point) -> f64 {
        match self {
            Region::Simplex(s) => s.convex_distance(z),
            Region::Prism(p) => p.convex_distance(z),
            Region::Ball(b) => z.dist(&b.center) / b.radius,
        }
    }
}

impl TryFrom<RegionSpec> for Region {
    type Error = Error;

    fn try_from(spec: RegionSpec) -> Result<Self> {
        Ok(match spec {
            RegionSpec::Simplex { vertices } => {
                Region::Simplex(SimplexCoords::new(vertices, 1e-14)?)
            }
            RegionSpec::Prism { polytope } => Region::Prism(polytope),
            RegionSpec::Ball { region } => Region::Ball(region),
        })
    }
}

impl From<Region> for RegionSpec {
    fn from(region: Region) -> Self {
        match region {
            Region::Simplex(s) => RegionSpec::Simplex {
                vertices: s.vertices,
            },
            Region::Prism(p) => RegionSpec::Prism { polytope: p },
            Region::Ball(b) => RegionSpec::Ball { region: b },
        }
    }
}

/// One prototype of a cover: the selected training point, its region and
/// whether the region lives inside the complement hull (and therefore
/// belongs to the in-hull cover the pre-classifier sees).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverPrototype {
    pub point: Point,
    pub region: Region,
    pub in_hull: bool,
}

/// The trained cover of one class.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cover {
    pub class: usize,
    pub kind: CoverKind,
    pub prototypes: Vec<CoverPrototype>,
    /// Set when the complement class could not be tessellated and the
    /// cover fell back to spherical regions.
    pub fallback_spherical: bool,
}

impl Cover {
    /// Convex distance from `z` to the nearest region of the cover.
    pub fn dissimilarity(&self, z: &Point) -> f64 {
        self.prototypes
            .iter()
            .map(|p| p.region.dissimilarity(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance restricted to the in-hull part; infinite when the cover
    /// has no in-hull regions.
    pub fn in_hull_dissimilarity(&self, z: &Point) -> f64 {
        self.prototypes
            .iter()
            .filter(|p| p.in_hull)
            .map(|p| p.region.dissimilarity(z))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }
}

/// Training hyperparameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainParams {
    /// Proportional-edge expansion factor, `>= 1`.
    pub r: f64,
    /// Spherical radius interpolation, `(0, 1]`; 0 maps to machine eps.
    pub theta: f64,
    /// Neighbor count for the kNN alternative and baseline.
    pub k: usize,
    pub cover: CoverKind,
    pub tol: f64,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            r: 2.0,
            theta: 1.0,
            k: 1,
            cover: CoverKind::Standard,
            tol: crate::DEFAULT_TOL,
            seed: 0,
        }
    }
}

/// Alternative classifier used by the hybrid when the pre-classifier
/// abstains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    Knn,
    Cccd,
}

/// How a prediction was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecisionPath {
    Pre,
    Alternative,
    Cover,
}

/// A classification outcome. `label == None` is the pre-classifier's
/// explicit no-decision; hybrid and cover classifiers always decide.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Option<usize>,
    /// Per-class convex distances behind the decision.
    pub dissimilarities: Vec<f64>,
    pub path: DecisionPath,
}

const MODEL_VERSION: u32 = 1;

/// A trained multi-class model: one cover per class (one-against-rest),
/// spherical covers alongside for the CCCD alternative, and the training
/// data for the kNN alternative. Immutable and shareable; prediction is
/// pure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainedModel {
    pub version: u32,
    pub params: TrainParams,
    pub class_names: Vec<String>,
    pub class_priors: Vec<f64>,
    pub covers: Vec<Cover>,
    pub spherical_covers: Vec<Cover>,
    pub train: Dataset,
    /// Count of training points dropped because they coincided with a
    /// point of another class (zero radius would break every ball).
    pub dropped_coincident: usize,
}

/// Builds the cover of one class from explicit target / non-target sets,
/// tessellating the complement internally.
pub fn build_cover(
    class: usize,
    targets: &[Point],
    nontargets: &[Point],
    kind: CoverKind,
    params: &TrainParams,
) -> Result<Cover> {
    if kind == CoverKind::Spherical {
        if targets.is_empty() {
            return Err(Error::EmptyClass(class));
        }
        return spherical_cover(class, targets, nontargets, params, false);
    }
    let tess_params = TessellationParams {
        tol: params.tol,
        perturb: true,
        seed: params.seed,
    };
    let tess = match delaunay_tessellate(nontargets, &tess_params) {
        Ok(t) => Some(t),
        Err(Error::InsufficientPoints { .. }) | Err(Error::DegenerateInput { .. }) => None,
        Err(e) => return Err(e),
    };
    build_cover_with_tess(class, targets, nontargets, tess.as_ref(), kind, params)
}

/// Same as [`build_cover`] but with the complement tessellation supplied
/// (or `None` when it could not be built, which triggers the spherical
/// fallback). Simulation campaigns reuse one tessellation across many
/// expansion factors this way.
pub fn build_cover_with_tess(
    class: usize,
    targets: &[Point],
    nontargets: &[Point],
    tess: Option<&Tessellation>,
    kind: CoverKind,
    params: &TrainParams,
) -> Result<Cover> {
    if targets.is_empty() {
        return Err(Error::EmptyClass(class));
    }
    if kind == CoverKind::Spherical {
        return spherical_cover(class, targets, nontargets, params, false);
    }
    let Some(tess) = tess else {
        // Complement too small or flat to tessellate: spherical regions
        // still cover the class.
        return spherical_cover(class, targets, nontargets, params, true);
    };

    let set = match kind {
        CoverKind::Standard => standard_mds(targets, tess, params.r),
        CoverKind::Composite => composite_mds(targets, nontargets, tess, params.r, params.theta)?,
        CoverKind::Spherical => unreachable!(),
    };

    let mut prototypes = Vec::with_capacity(set.len());
    for proto in &set.prototypes {
        let (region, in_hull) = match &proto.region {
            RegionHandle::Inner(inner) => (
                Region::Simplex(inner_region_simplex(tess, inner, params.tol)?),
                true,
            ),
            RegionHandle::Outer(outer) => (
                Region::Prism(outer_region_polytope(tess, outer)?),
                false,
            ),
            RegionHandle::Ball(ball) => (Region::Ball(ball.clone()), false),
        };
        debug_assert!(matches!(proto.provenance, Provenance::InnerExact) == in_hull);
        prototypes.push(CoverPrototype {
            point: targets[proto.target_id].clone(),
            region,
            in_hull,
        });
    }
    Ok(Cover {
        class,
        kind,
        prototypes,
        fallback_spherical: false,
    })
}

fn spherical_cover(
    class: usize,
    targets: &[Point],
    nontargets: &[Point],
    params: &TrainParams,
    fallback: bool,
) -> Result<Cover> {
    let (digraph, radii) = build_cccd(targets, nontargets, params.theta)?;
    let prototypes = greedy_mds(&digraph)
        .into_iter()
        .map(|i| CoverPrototype {
            point: targets[i].clone(),
            region: Region::Ball(BallRegion {
                center: targets[i].clone(),
                radius: radii[i],
                theta: params.theta,
            }),
            in_hull: false,
        })
        .collect();
    Ok(Cover {
        class,
        kind: CoverKind::Spherical,
        prototypes,
        fallback_spherical: fallback,
    })
}

/// Explicit vertices of an inner proportional-edge region: the cell
/// shrunk toward its anchor vertex by the expansion factor, capped at
/// the cell itself.
fn inner_region_simplex(
    tess: &Tessellation,
    region: &crate::proximity::InnerPERegion,
    tol: f64,
) -> Result<SimplexCoords> {
    let cell = &tess.cells[region.cell];
    let apex = &cell.geom.vertices[region.vertex];
    // The scale factor is r (1 - w_anchor) = 1 - tau; a floor keeps the
    // simplex non-degenerate when the anchor sits on the apex itself.
    let scale = (1.0 - region.tau).clamp(1e-9, 1.0);
    let vertices: Vec<Point> = cell
        .geom
        .vertices
        .iter()
        .map(|v| apex.add_scaled(&v.sub(apex), scale))
        .collect();
    SimplexCoords::new(vertices, tol.min(1e-12))
}

/// The outer region as a polytope: cone coordinates non-negative, sum
/// between 1 (the hull facet) and the region's level cap. The designated
/// center is the centroid of its 2d vertices.
fn outer_region_polytope(
    tess: &Tessellation,
    region: &crate::proximity::OuterPERegion,
) -> Result<Polytope> {
    let outer = &tess.outer[region.outer];
    let cm = &tess.hull_center;
    let d = tess.dim();
    // A floor on the cap keeps the prism full-dimensional for anchors
    // numerically on the facet.
    let cap = region.level_cap.max(1.0 + 1e-6);

    // Gradient rows of c(x) = B^{-1} (x - C_M) come from the cone basis.
    let basis = nalgebra::DMatrix::from_fn(d, d, |r, c| outer.ray_directions[c].coords[r]);
    let inv = basis.try_inverse().ok_or(Error::DegenerateCone)?;
    let mut halfspaces = Vec::with_capacity(d + 2);
    for i in 0..d {
        // c_i(x) >= 0  ->  -row_i . x <= -row_i . C_M
        let row: Vec<f64> = (0..d).map(|j| -inv[(i, j)]).collect();
        let offset: f64 = row.iter().zip(&cm.coords).map(|(a, b)| a * b).sum();
        halfspaces.push(HalfSpace {
            normal: row,
            offset,
        });
    }
    // Gradient of sum c(x): column sums of the inverse.
    let grad: Vec<f64> = (0..d).map(|j| (0..d).map(|i| inv[(i, j)]).sum()).collect();
    let grad_dot_cm: f64 = grad.iter().zip(&cm.coords).map(|(a, b)| a * b).sum();
    halfspaces.push(HalfSpace {
        normal: grad.iter().map(|g| -g).collect(),
        offset: -(grad_dot_cm + 1.0),
    });
    halfspaces.push(HalfSpace {
        normal: grad.clone(),
        offset: grad_dot_cm + cap,
    });

    let facet_mean = centroid(outer.facet_vertex_ids.iter().map(|&i| &tess.points[i]));
    let center = cm.add_scaled(&facet_mean.sub(cm), (1.0 + cap) / 2.0);
    Polytope::new(halfspaces, center, 0.0)
}

/// Trains covers for every class one-against-rest.
pub fn train(dataset: &Dataset, params: &TrainParams) -> Result<TrainedModel> {
    if dataset.n_classes() < 2 {
        return Err(Error::InvalidConfig(
            "training needs at least two classes".into(),
        ));
    }
    if dataset.dim() > crate::MAX_DIM {
        return Err(Error::DimensionTooLarge(dataset.dim()));
    }
    let (clean, dropped_coincident) = drop_cross_class_duplicates(dataset);
    let n = clean.len() as f64;

    let mut covers = Vec::with_capacity(clean.n_classes());
    let mut spherical_covers = Vec::with_capacity(clean.n_classes());
    let mut class_priors = Vec::with_capacity(clean.n_classes());
    for class in 0..clean.n_classes() {
        let targets = clean.class_points(class);
        let nontargets = clean.complement_points(class);
        if targets.is_empty() {
            return Err(Error::EmptyClass(class));
        }
        covers.push(build_cover(
            class,
            &targets,
            &nontargets,
            params.cover,
            params,
        )?);
        spherical_covers.push(if params.cover == CoverKind::Spherical {
            covers[class].clone()
        } else {
            spherical_cover(class, &targets, &nontargets, params, false)?
        });
        class_priors.push(targets.len() as f64 / n);
    }
    Ok(TrainedModel {
        version: MODEL_VERSION,
        params: params.clone(),
        class_names: clean.class_names.clone(),
        class_priors,
        covers,
        spherical_covers,
        train: clean,
        dropped_coincident,
    })
}

/// Removes points that coincide with a point of another class; each ball
/// radius would otherwise be zero. Returns the cleaned dataset and the
/// number of rows dropped.
fn drop_cross_class_duplicates(dataset: &Dataset) -> (Dataset, usize) {
    let n = dataset.len();
    let mut keep = vec![true; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dataset.labels[i] != dataset.labels[j]
                && dataset.points[i].coords == dataset.points[j].coords
            {
                keep[i] = false;
                keep[j] = false;
            }
        }
    }
    let rows: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    let dropped = n - rows.len();
    (dataset.subset(&rows), dropped)
}

impl TrainedModel {
    /// Assembles a model from prebuilt covers; the simulation engine
    /// uses this to share tessellations across expansion factors.
    pub fn assemble(
        params: TrainParams,
        train: Dataset,
        covers: Vec<Cover>,
        spherical_covers: Vec<Cover>,
        dropped_coincident: usize,
    ) -> Self {
        let n = train.len() as f64;
        let class_priors = (0..train.n_classes())
            .map(|c| train.class_count(c) as f64 / n)
            .collect();
        TrainedModel {
            version: MODEL_VERSION,
            params,
            class_names: train.class_names.clone(),
            class_priors,
            covers,
            spherical_covers,
            train,
            dropped_coincident,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Per-class convex distances to the full covers.
    pub fn cover_dissimilarities(&self, z: &Point) -> Vec<f64> {
        self.covers.iter().map(|c| c.dissimilarity(z)).collect()
    }

    /// The pre-classifier: decides by nearest in-hull cover when `z`
    /// lies inside at least one (distance below 1), otherwise abstains.
    pub fn pre_classify(&self, z: &Point) -> Prediction {
        let rhos: Vec<f64> = self
            .covers
            .iter()
            .map(|c| c.in_hull_dissimilarity(z))
            .collect();
        let best = argmin(&rhos);
        if rhos[best] < 1.0 {
            Prediction {
                label: Some(best),
                dissimilarities: rhos,
                path: DecisionPath::Pre,
            }
        } else {
            Prediction {
                label: None,
                dissimilarities: rhos,
                path: DecisionPath::Pre,
            }
        }
    }

    /// Hybrid classifier: the pre-classifier when it decides, the
    /// alternative otherwise. Never abstains.
    pub fn hybrid_classify(&self, z: &Point, alternative: Alternative) -> Prediction {
        let pre = self.pre_classify(z);
        if pre.label.is_some() {
            return pre;
        }
        match alternative {
            Alternative::Knn => {
                let label = knn_classify(&self.train, z, self.params.k);
                Prediction {
                    label: Some(label),
                    dissimilarities: pre.dissimilarities,
                    path: DecisionPath::Alternative,
                }
            }
            Alternative::Cccd => {
                let rhos: Vec<f64> = self
                    .spherical_covers
                    .iter()
                    .map(|c| c.dissimilarity(z))
                    .collect();
                let label = argmin(&rhos);
                Prediction {
                    label: Some(label),
                    dissimilarities: rhos,
                    path: DecisionPath::Alternative,
                }
            }
        }
    }

    /// Cover classifier: the class of the nearest cover. Never abstains.
    pub fn cover_classify(&self, z: &Point) -> Prediction {
        let rhos = self.cover_dissimilarities(z);
        Prediction {
            label: Some(argmin(&rhos)),
            dissimilarities: rhos,
            path: DecisionPath::Cover,
        }
    }

    /// Spherical-cover classifier over the stored CCCD covers.
    pub fn cccd_classify(&self, z: &Point) -> Prediction {
        let rhos: Vec<f64> = self
            .spherical_covers
            .iter()
            .map(|c| c.dissimilarity(z))
            .collect();
        Prediction {
            label: Some(argmin(&rhos)),
            dissimilarities: rhos,
            path: DecisionPath::Cover,
        }
    }

    /// Threshold-free binary decision score `rho_0 - rho_1`: positive
    /// leans class 1. Only defined for two-class models.
    pub fn decision_score(&self, z: &Point) -> Option<f64> {
        (self.n_classes() == 2).then(|| {
            let rhos = self.cover_dissimilarities(z);
            rhos[0] - rhos[1]
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: TrainedModel = serde_json::from_str(s)?;
        if model.version != MODEL_VERSION {
            return Err(Error::ModelFormat(format!(
                "model version {} != supported {}",
                model.version, MODEL_VERSION
            )));
        }
        Ok(model)
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Majority vote among the `k` nearest training points. Distance ties
/// resolve to the lower row index, vote ties to the lower class index.
pub fn knn_classify(train: &Dataset, z: &Point, k: usize) -> usize {
    debug_assert!(k >= 1 && k <= train.len());
    let mut order: Vec<usize> = (0..train.len()).collect();
    order.sort_by(|&a, &b| {
        let da = train.points[a].dist_sq(z);
        let db = train.points[b].dist_sq(z);
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    let mut votes = vec![0usize; train.n_classes()];
    for &i in order.iter().take(k.min(train.len())) {
        votes[train.labels[i]] += 1;
    }
    let mut best = 0;
    for (c, &v) in votes.iter().enumerate().skip(1) {
        if v > votes[best] {
            best = c;
        }
    }
    best
}

/// Stand-alone spherical-cover classifier: greedy CCCD prototypes per
/// class (one-against-rest), then nearest scaled prototype wins.
pub fn cccd_classify(train: &Dataset, z: &Point, theta: f64) -> Result<usize> {
    let mut best_class = 0;
    let mut best_ratio = f64::INFINITY;
    for class in 0..train.n_classes() {
        let targets = train.class_points(class);
        let nontargets = train.complement_points(class);
        if targets.is_empty() {
            continue;
        }
        let (digraph, radii) = build_cccd(&targets, &nontargets, theta)?;
        for i in greedy_mds(&digraph) {
            let ratio = z.dist(&targets[i]) / radii[i];
            if ratio < best_ratio {
                best_ratio = ratio;
                best_class = class;
            }
        }
    }
    Ok(best_class)
}

/// Coverage invariant: every target sits in its cover (distance below
/// one, up to tolerance).
pub fn check_coverage(cover: &Cover, targets: &[Point], tol: f64) -> bool {
    targets.iter().all(|t| cover.dissimilarity(t) < 1.0 + tol)
}

/// Purity invariant: no opposite-class point strictly inside any single
/// region of the cover.
pub fn check_purity(cover: &Cover, others: &[Point], tol: f64) -> bool {
    others.iter().all(|z| {
        cover
            .prototypes
            .iter()
            .all(|p| p.region.dissimilarity(z) >= 1.0 - tol)
    })
}
