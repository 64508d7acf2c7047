//! Grünwald–Letnikov weights and the WSGD weight systems.
//!
//! The normalized Grünwald weights `w_k` are the coefficients of the
//! fractional binomial expansion `(1 - z)^alpha`. A weighted-and-shifted
//! Grünwald difference (WSGD) operator combines two or three shifted
//! Grünwald sums with weights `lambda_j` chosen so that the first-order
//! error term cancels, which requires
//!
//! ```text
//! sum_j lambda_j              = 1
//! sum_j lambda_j (p_j - a/2)  = 0
//! ```
//!
//! for shifts `p_j`. With the canonical shifts `(1, 0, -1)` the solution
//! is a one-parameter family, organized here as the three sets `S1`, `S2`,
//! `S3` indexed by which `lambda_j` is chosen freely. The three shifted
//! sums fuse into a single convolution stencil with weights `g_k`.

use crate::error::{Result, WsgdError};

/// A fractional differentiation order in `(1, 2]`.
///
/// `alpha = 2` is admitted so the classical-reduction checks (the WSGD
/// stencil collapsing to the central second difference) run through the
/// same code paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
            Ok(Self(alpha))
        } else {
            Err(WsgdError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// A finite prefix of the normalized Grünwald weights for one order.
#[derive(Clone, Debug)]
pub struct GrunwaldSeq {
    pub alpha: FractionalOrder,
    pub w: Vec<f64>,
}

/// Normalized Grünwald weights `w_0..w_{L-1}` via the stable multiplicative
/// recurrence `w_k = (1 - (alpha+1)/k) w_{k-1}`, `w_0 = 1`.
///
/// The recurrence avoids the overflow and cancellation of the Gamma-ratio
/// formula for large `k`.
pub fn grunwald_weights(alpha: FractionalOrder, l: usize) -> GrunwaldSeq {
    let a = alpha.get();
    let mut w = Vec::with_capacity(l.max(1));
    w.push(1.0);
    for k in 1..l {
        let prev = w[k - 1];
        w.push((1.0 - (a + 1.0) / k as f64) * prev);
    }
    w.truncate(l.max(1));
    GrunwaldSeq { alpha, w }
}

/// The three one-parameter families of admissible weight triples for the
/// shift set `(1, 0, -1)`, indexed by which `lambda_j` is free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamSet {
    S1,
    S2,
    S3,
}

impl std::str::FromStr for ParamSet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S1" => Ok(ParamSet::S1),
            "S2" => Ok(ParamSet::S2),
            "S3" => Ok(ParamSet::S3),
            other => Err(format!("unknown parameter set '{other}' (expected S1, S2, or S3)")),
        }
    }
}

impl std::fmt::Display for ParamSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamSet::S1 => write!(f, "S1"),
            ParamSet::S2 => write!(f, "S2"),
            ParamSet::S3 => write!(f, "S3"),
        }
    }
}

/// A weight triple `(lambda1, lambda2, lambda3)` tied to a fractional order,
/// satisfying the defining linear system for shifts `(1, 0, -1)`.
#[derive(Clone, Copy, Debug)]
pub struct WsgdParams {
    alpha: FractionalOrder,
    lambda: [f64; 3],
}

const CONSTRAINT_TOL: f64 = 1e-12;

impl WsgdParams {
    /// Builds a triple, verifying both constraints:
    /// `l1 + l2 + l3 = 1` and `l1 - l3 = alpha/2`.
    pub fn new(alpha: FractionalOrder, l1: f64, l2: f64, l3: f64) -> Result<Self> {
        let a = alpha.get();
        if (l1 + l2 + l3 - 1.0).abs() > CONSTRAINT_TOL || (l1 - l3 - a / 2.0).abs() > CONSTRAINT_TOL
        {
            return Err(WsgdError::InvalidParams(l1, l2, l3, a));
        }
        Ok(Self { alpha, lambda: [l1, l2, l3] })
    }

    /// Adopts a general-shift solution, rejecting any shift set other than
    /// the canonical `(1, 0, -1)` (or `(1, 0)`, which embeds with
    /// `lambda3 = 0`) that the grid operators support.
    pub fn from_general(alpha: FractionalOrder, shifts: &ShiftSet, weights: &[f64]) -> Result<Self> {
        let p = shifts.shifts();
        match (p, weights) {
            ([1.0, 0.0, -1.0], [l1, l2, l3]) => Self::new(alpha, *l1, *l2, *l3),
            ([1.0, 0.0], [l1, l2]) => Self::new(alpha, *l1, *l2, 0.0),
            _ => Err(WsgdError::UnsupportedShifts(p.to_vec())),
        }
    }

    #[inline]
    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    #[inline]
    pub fn lambda(&self) -> [f64; 3] {
        self.lambda
    }
}

/// Closed-form solution of the weight system for one of the sets S1/S2/S3.
pub fn params_from_set(set: ParamSet, free_value: f64, alpha: FractionalOrder) -> WsgdParams {
    let a = alpha.get();
    let lambda = match set {
        ParamSet::S1 => {
            let l1 = free_value;
            [l1, (2.0 + a) / 2.0 - 2.0 * l1, l1 - a / 2.0]
        }
        ParamSet::S2 => {
            let l2 = free_value;
            [(2.0 + a) / 4.0 - l2 / 2.0, l2, (2.0 - a) / 4.0 - l2 / 2.0]
        }
        ParamSet::S3 => {
            let l3 = free_value;
            [a / 2.0 + l3, (2.0 - a) / 2.0 - 2.0 * l3, l3]
        }
    };
    // The closed forms satisfy the constraints identically; construction
    // cannot fail beyond floating-point noise well inside the tolerance.
    WsgdParams { alpha, lambda }
}

/// A set of `m` in `{2, 3}` pairwise-distinct real grid shifts.
#[derive(Clone, Debug)]
pub struct ShiftSet {
    shifts: Vec<f64>,
}

impl ShiftSet {
    pub fn new(shifts: Vec<f64>) -> Result<Self> {
        if shifts.len() < 2 || shifts.len() > 3 {
            return Err(WsgdError::InvalidGrid(format!(
                "shift sets must have 2 or 3 entries, got {}",
                shifts.len()
            )));
        }
        for i in 0..shifts.len() {
            for j in (i + 1)..shifts.len() {
                if shifts[i] == shifts[j] {
                    return Err(WsgdError::DegenerateShifts { i: i + 1, j: j + 1, value: shifts[i] });
                }
            }
        }
        Ok(Self { shifts })
    }

    /// The canonical shift set `(1, 0, -1)` used by the grid operators.
    pub fn canonical() -> Self {
        Self { shifts: vec![1.0, 0.0, -1.0] }
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }
}

/// Solves the weight linear system for a general shift set.
///
/// For `m = 2` the system is square and `given` must be `None`; for `m = 3`
/// it is underdetermined and exactly one weight must be fixed via
/// `given = (index, value)` (zero-based index into the shift list).
pub fn params_general(
    shifts: &ShiftSet,
    given: Option<(usize, f64)>,
    alpha: FractionalOrder,
) -> Result<Vec<f64>> {
    let a2 = alpha.get() / 2.0;
    let p = shifts.shifts();
    match (p.len(), given) {
        (2, None) => {
            // l1 + l2 = 1, l1 (p1 - a/2) + l2 (p2 - a/2) = 0.
            let denom = p[0] - p[1];
            let l1 = (a2 - p[1]) / denom;
            Ok(vec![l1, 1.0 - l1])
        }
        (2, Some(_)) => Err(WsgdError::InvalidGrid(
            "a two-shift system is square; no weight may be fixed".into(),
        )),
        (3, Some((gi, gv))) => {
            if gi > 2 {
                return Err(WsgdError::InvalidGrid(format!(
                    "given-weight index {gi} out of range for a three-shift system"
                )));
            }
            let (i, j) = match gi {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            if p[i] == p[j] {
                return Err(WsgdError::DegenerateShifts { i: i + 1, j: j + 1, value: p[i] });
            }
            // Remaining 2x2 system in (li, lj):
            //   li + lj = 1 - gv
            //   li (pi - a/2) + lj (pj - a/2) = -gv (pg - a/2)
            let s = 1.0 - gv;
            let t = -gv * (p[gi] - a2);
            let ci = p[i] - a2;
            let cj = p[j] - a2;
            let lj = (t - s * ci) / (cj - ci);
            let li = s - lj;
            let mut out = vec![0.0; 3];
            out[gi] = gv;
            out[i] = li;
            out[j] = lj;
            Ok(out)
        }
        (3, None) => Err(WsgdError::InvalidGrid(
            "a three-shift system is underdetermined; fix exactly one weight".into(),
        )),
        _ => unreachable!("ShiftSet::new enforces m in {{2, 3}}"),
    }
}

/// The fused WSGD weight sequence for one triple.
#[derive(Clone, Debug)]
pub struct WsgdSeq {
    pub params: WsgdParams,
    pub g: Vec<f64>,
}

/// Fused convolution weights for an arbitrary (possibly unconstrained)
/// weight triple:
/// `g_0 = l1 w_0`, `g_1 = l1 w_1 + l2 w_0`,
/// `g_k = l1 w_k + l2 w_{k-1} + l3 w_{k-2}` for `k >= 2`.
pub fn fused_weights(alpha: FractionalOrder, lambda: [f64; 3], l: usize) -> Vec<f64> {
    let w = grunwald_weights(alpha, l.max(1)).w;
    let [l1, l2, l3] = lambda;
    let mut g = Vec::with_capacity(l.max(1));
    g.push(l1 * w[0]);
    if l >= 2 {
        g.push(l1 * w[1] + l2 * w[0]);
    }
    for k in 2..l {
        g.push(l1 * w[k] + l2 * w[k - 1] + l3 * w[k - 2]);
    }
    g
}

/// Length-`L` fused weight sequence for a constrained triple.
pub fn wsgd_weights(params: &WsgdParams, l: usize) -> WsgdSeq {
    WsgdSeq { params: *params, g: fused_weights(params.alpha(), params.lambda(), l) }
}

/// The three canonical triples whose second-order error constants have
/// closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalTriple {
    /// `(a/2, (2-a)/2, 0)`
    First,
    /// `((2+a)/4, 0, (2-a)/4)`
    Second,
    /// `((2+a)/2, -(2+a)/2, 1)`
    Third,
}

impl CanonicalTriple {
    pub fn lambda(self, alpha: FractionalOrder) -> [f64; 3] {
        let a = alpha.get();
        match self {
            CanonicalTriple::First => [a / 2.0, (2.0 - a) / 2.0, 0.0],
            CanonicalTriple::Second => [(2.0 + a) / 4.0, 0.0, (2.0 - a) / 4.0],
            CanonicalTriple::Third => [(2.0 + a) / 2.0, -(2.0 + a) / 2.0, 1.0],
        }
    }

    pub fn params(self, alpha: FractionalOrder) -> WsgdParams {
        let [l1, l2, l3] = self.lambda(alpha);
        WsgdParams { alpha, lambda: [l1, l2, l3] }
    }
}

/// Leading second-order error constant `C_alpha` of a canonical triple.
/// Diagnostic only; not used in the solvers.
pub fn error_constant(alpha: FractionalOrder, triple: CanonicalTriple) -> f64 {
    let a = alpha.get();
    let tail = (3.0 * a * a + a) / 24.0;
    match triple {
        CanonicalTriple::First => (a - a * a) / 4.0 + tail,
        CanonicalTriple::Second => (2.0 - a * a) / 4.0 + tail,
        CanonicalTriple::Third => (4.0 - a * a) / 4.0 + tail,
    }
}
