//! Uniform fit/predict interface over the classifier zoo, used by the
//! cross-validation and simulation drivers.

use serde::{Deserialize, Serialize};

use crate::classify::{
    self, knn_classify, Alternative, CoverKind, TrainParams, TrainedModel,
};
use crate::data::Dataset;
use crate::error::Result;
use crate::eval::pca::Pca;
use crate::geometry::Point;

/// The classifiers the evaluation harness knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassifierKind {
    StandardCover,
    CompositeCover,
    PeKnn,
    PeCccd,
    Knn,
    Cccd,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 6] = [
        ClassifierKind::StandardCover,
        ClassifierKind::CompositeCover,
        ClassifierKind::PeKnn,
        ClassifierKind::PeCccd,
        ClassifierKind::Knn,
        ClassifierKind::Cccd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::StandardCover => "standard-cover",
            ClassifierKind::CompositeCover => "composite-cover",
            ClassifierKind::PeKnn => "pe-knn",
            ClassifierKind::PeCccd => "pe-cccd",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Cccd => "cccd",
        }
    }

    pub fn parse(s: &str) -> Option<ClassifierKind> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// Whether the proportional-edge expansion factor matters.
    pub fn uses_r(&self) -> bool {
        !matches!(self, ClassifierKind::Knn | ClassifierKind::Cccd)
    }

    /// Whether prototype-set reductions are reported.
    pub fn reports_reduction(&self) -> bool {
        matches!(
            self,
            ClassifierKind::StandardCover | ClassifierKind::CompositeCover
        )
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A classifier plus its hyperparameters, ready to fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    pub r: f64,
    pub theta: f64,
    pub k: usize,
    /// When set, a PCA to this dimension is fitted on each training set
    /// and applied to its test points.
    pub pca_dim: Option<usize>,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind) -> Self {
        ClassifierSpec {
            kind,
            r: 2.0,
            theta: 1.0,
            k: 1,
            pca_dim: None,
        }
    }

    fn train_params(&self, seed: u64) -> TrainParams {
        TrainParams {
            r: self.r,
            theta: self.theta,
            k: self.k,
            cover: match self.kind {
                ClassifierKind::CompositeCover => CoverKind::Composite,
                ClassifierKind::Cccd => CoverKind::Spherical,
                _ => CoverKind::Standard,
            },
            tol: crate::DEFAULT_TOL,
            seed,
        }
    }

    pub fn fit(&self, train: &Dataset, seed: u64) -> Result<Fitted> {
        let (train_view, pca) = match self.pca_dim {
            Some(dim) => {
                let pca = Pca::fit(&train.points, dim)?;
                let points = pca.transform_all(&train.points);
                (
                    Dataset::new(points, train.labels.clone(), train.class_names.clone()),
                    Some(pca),
                )
            }
            None => (train.clone(), None),
        };
        let model = match self.kind {
            ClassifierKind::Knn => None,
            _ => Some(classify::train(&train_view, &self.train_params(seed))?),
        };
        Ok(Fitted {
            spec: self.clone(),
            train: train_view,
            model,
            pca,
        })
    }
}

/// A fitted classifier; prediction is pure.
pub struct Fitted {
    pub spec: ClassifierSpec,
    train: Dataset,
    pub model: Option<TrainedModel>,
    pca: Option<Pca>,
}

impl Fitted {
    pub fn predict(&self, z: &Point) -> usize {
        let z = match &self.pca {
            Some(pca) => pca.transform(z),
            None => z.clone(),
        };
        match self.spec.kind {
            ClassifierKind::Knn => knn_classify(&self.train, &z, self.spec.k),
            ClassifierKind::Cccd => self
                .model
                .as_ref()
                .unwrap()
                .cccd_classify(&z)
                .label
                .unwrap(),
            ClassifierKind::StandardCover | ClassifierKind::CompositeCover => self
                .model
                .as_ref()
                .unwrap()
                .cover_classify(&z)
                .label
                .unwrap(),
            ClassifierKind::PeKnn => self
                .model
                .as_ref()
                .unwrap()
                .hybrid_classify(&z, Alternative::Knn)
                .label
                .unwrap(),
            ClassifierKind::PeCccd => self
                .model
                .as_ref()
                .unwrap()
                .hybrid_classify(&z, Alternative::Cccd)
                .label
                .unwrap(),
        }
    }

    pub fn predict_all(&self, points: &[Point]) -> Vec<usize> {
        points.iter().map(|z| self.predict(z)).collect()
    }

    /// Prototype counts per class for cover classifiers.
    pub fn prototype_counts(&self) -> Option<Vec<usize>> {
        if !self.spec.kind.reports_reduction() {
            return None;
        }
        self.model
            .as_ref()
            .map(|m| m.covers.iter().map(|c| c.len()).collect())
    }
}
