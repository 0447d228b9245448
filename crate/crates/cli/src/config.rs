//! Run configuration read from TOML. Unknown keys are rejected everywhere.

use std::path::PathBuf;

use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Integrate,
    Rdcheck,
    Solve,
    Picard,
    Mnc,
    Kamke,
    Parabolic,
    Study,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Integrate => "integrate",
            Command::Rdcheck => "rdcheck",
            Command::Solve => "solve",
            Command::Picard => "picard",
            Command::Mnc => "mnc",
            Command::Kamke => "kamke",
            Command::Parabolic => "parabolic",
            Command::Study => "study",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub seed: Option<u64>,
    pub scale: Option<ScaleSpec>,
    /// Sub-interval `[a, b]` of the scale; the whole scale by default.
    pub interval: Option<[f64; 2]>,
    pub classify: Option<ClassifyCfg>,
    pub integrate: Option<FunctionCfg>,
    pub rdcheck: Option<FunctionCfg>,
    pub solve: Option<IvpCfg>,
    pub picard: Option<IvpCfg>,
    pub mnc: Option<MncCfg>,
    pub kamke: Option<KamkeCfg>,
    pub parabolic: Option<ParabolicCfg>,
    pub study: Option<ParabolicCfg>,
}

/// Either inline `segments = [[lo, hi], ...]` or a segment-list `file`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub segments: Option<Vec<[f64; 2]>>,
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyCfg {
    /// Defaults to every segment endpoint.
    pub points: Option<Vec<f64>>,
}

/// A scalar function of one variable.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarFn {
    Constant {
        value: f64,
    },
    /// `c0 + c1 t + c2 t^2 + ...`
    Poly {
        coefficients: Vec<f64>,
    },
    Exp {
        #[serde(default = "one")]
        amplitude: f64,
        rate: f64,
    },
    Sin {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `value` at `at`, zero elsewhere.
    Point {
        at: f64,
        #[serde(default = "one")]
        value: f64,
    },
    /// `left` for `t <= at`, `right` after.
    Step {
        at: f64,
        left: f64,
        right: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// A grid function given by components or read from CSV.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionCfg {
    pub h: f64,
    pub function: Option<Vec<ScalarFn>>,
    pub function_csv: Option<PathBuf>,
    /// rd-continuity tolerance (`rdcheck` only).
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RhsCfg {
    /// `f(t, u) = A u + c`, `matrix` given row by row.
    Linear {
        matrix: Vec<Vec<f64>>,
        offset: Option<Vec<f64>>,
    },
    Constant {
        value: Vec<f64>,
    },
    /// `f(t, u) = (g_1(t), ..., g_d(t))`.
    Forcing {
        components: Vec<ScalarFn>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormCfg {
    Euclidean,
    Max,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyCfg {
    Existence,
    Whole,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IvpCfg {
    pub h: f64,
    pub u0: Vec<f64>,
    pub beta: f64,
    /// Bound of `|f|` on the ball; estimated by sampling when absent.
    pub m: Option<f64>,
    pub rhs: RhsCfg,
    pub norm: Option<NormCfg>,
    pub window: Option<PolicyCfg>,
    // picard only
    pub k_max: Option<usize>,
    pub tol: Option<f64>,
    pub xk_samples: Option<usize>,
    pub xk_k_max: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MncCfg {
    /// Tailed-sequence literals, e.g. `{prefix: [1, 2], tail: geometric(1, 0.5)}`.
    pub family: Vec<String>,
    /// Rounds of the axiom suite; skipped when zero or absent.
    pub axiom_trials: Option<usize>,
    /// Profile entries written per member.
    pub profile_len: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KamkeCfg {
    pub h: f64,
    pub q: Option<ScalarFn>,
    pub q_csv: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub x_max: Option<f64>,
    pub eps: Option<f64>,
}

/// Spatial profile `x -> value`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileCfg {
    Zero,
    /// `amplitude * ratio^x`
    Geometric {
        #[serde(default = "one")]
        amplitude: f64,
        ratio: f64,
    },
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Values at `x = dx, 2 dx, ...`, inline or one number per line of `file`;
    /// zero past the end.
    Table {
        values: Option<Vec<f64>>,
        file: Option<PathBuf>,
    },
}

/// `F(t, x) = time(t) * profile(x)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingCfg {
    pub profile: ProfileCfg,
    pub time: Option<ScalarFn>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayCfg {
    Geometric,
    Polynomial,
    None,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicCfg {
    pub n: usize,
    pub beta: f64,
    pub h: f64,
    pub phi: ProfileCfg,
    pub forcing: Option<ForcingCfg>,
    pub psi: Option<ScalarFn>,
    /// Forcing bound; the sampled sup of `|F|` when absent.
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub dx: Option<f64>,
    pub decay: Option<DecayCfg>,
    pub window: Option<PolicyCfg>,
    pub hypothesis_samples: Option<usize>,
    pub eps: Option<f64>,
    /// Truncations compared by `study`.
    pub n_list: Option<Vec<usize>>,
}
