use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}) outside chart")]
    OutsideChart { x: f64, y: f64 },

    #[error("grid too coarse: {0} (need nx, ny >= 9)")]
    GridTooCoarse(String),

    #[error("solver did not converge: residual {residual:.3e} after {iters} Newton iterations")]
    SolverFailure { residual: f64, iters: usize },

    #[error("iterate left the spacelike set (margin {margin:.3e}, guard {guard:.3e}); boundary data too steep")]
    SpacelikeBreakdown { margin: f64, guard: f64 },

    #[error("non-spacelike graph at node {index}: 1 - |Du|^2 = {margin:.3e}")]
    NonSpacelike { index: usize, margin: f64 },

    #[error("degenerate mesh edge {v0}-{v1}: length {len:.3e}")]
    DegenerateEdge { v0: usize, v1: usize, len: f64 },

    #[error("geodesic disc of radius {r} is not compactly contained: chart boundary at distance {boundary_dist}")]
    NotCompactlyContained { r: f64, boundary_dist: f64 },

    #[error("c_r is only defined for alpha >= 1, got {0}")]
    AlphaBelowOne(f64),

    #[error("radius bound undefined: the disc integral of |A|^2 is zero (totally geodesic disc)")]
    UndefinedBound,

    #[error("surface is not maximal: sup |H| = {sup_h:.3e} exceeds {tol:.3e}")]
    NotMaximal { sup_h: f64, tol: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
