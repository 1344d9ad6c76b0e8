use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point ({re}, {im}) is not strictly inside the unit disc")]
    OutsideDisc { re: f64, im: f64 },
    #[error("boundary coordinates (theta={theta}, delta={delta}) do not describe a disc point")]
    BadCoords { theta: f64, delta: f64 },
    #[error("chord estimate only holds on (-1/4, 1/4)^2, got ({theta}, {delta})")]
    OutsideChordSquare { theta: f64, delta: f64 },
    #[error("shadows need aperture b >= 1")]
    ZeroAperture,
    #[error("arc length {0} is outside (0, 2pi]")]
    BadArcLength(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("radius {r} is outside (0, {r_max}]")]
    RadiusOutOfRange { r: f64, r_max: f64 },
    #[error("ladder must be strictly decreasing")]
    LadderNotDecreasing,
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("tail at radius {0} is empty: the region does not end at its base point within resolution")]
    EmptyTail(f64),
    #[error("sequence index {index} exceeds the double-precision cutoff {cutoff}")]
    IndexCutoff { index: u64, cutoff: u64 },
    #[error("operation needs exact membership, region kind {0} only has a sampling rule")]
    Unsupported(&'static str),
    #[error("regions have different base points")]
    BaseMismatch,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdjacencyError {
    #[error("refutation needs an exhaustively enumerable sequence tail: {0}")]
    NotEnumerable(String),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which hypothesis of the divergence theorem a family fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Hypothesis {
    /// every region ends tangentially
    Tangential,
    /// every region is projectively adjacent
    Adjacent,
    /// shadows of open sets are measurable
    Regular,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Hypothesis::Tangential => "(t) tangential approach",
            Hypothesis::Adjacent => "[p] projective adjacency",
            Hypothesis::Regular => "[reg] regularity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("hypothesis {hypothesis} fails at w={angle}: {detail}")]
    Hypothesis { hypothesis: Hypothesis, angle: f64, detail: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no phi below {bound} meets the level-{level} threshold {threshold}")]
    PhiSearch { level: usize, threshold: f64, bound: u64 },
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Adjacency(#[from] AdjacencyError),
}
