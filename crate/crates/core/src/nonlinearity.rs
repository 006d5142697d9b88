//! Scalar self-interaction `g(s)` shared by the NLS and Dirac equations.
//!
//! Besides `g` and `g'` the solvers need two antiderivatives:
//!
//! * `G(s) = ∫₀ˢ g(t) dt`, the potential density of the energy functional;
//! * `K(s) = ∫₀ˢ t·g'(t) dt`.
//!
//! Both vanish at zero. The mass `m = g(0)` must be positive.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Selects one of the four functions carried by a [`NonlinearityModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelFn {
    G,
    GPrime,
    /// Antiderivative of `g` with `G(0) = 0`.
    BigG,
    /// Antiderivative of `s·g'(s)` with `K(0) = 0`.
    K,
}

/// Dense polynomial `c₀ + c₁s + c₂s² + …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coefficients = self.coefficients.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect();
        Polynomial { coefficients }
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Polynomial {
        let mut coefficients = Vec::with_capacity(self.coefficients.len() + 1);
        coefficients.push(0.0);
        coefficients.extend(self.coefficients.iter().enumerate().map(|(i, &c)| c / (i as f64 + 1.0)));
        Polynomial { coefficients }
    }

    /// `s·p(s)`.
    pub fn shift_up(&self) -> Polynomial {
        let mut coefficients = Vec::with_capacity(self.coefficients.len() + 1);
        coefficients.push(0.0);
        coefficients.extend_from_slice(&self.coefficients);
        Polynomial { coefficients }
    }
}

/// User-supplied nonlinearity. `g`, `g'` and `G` are mandatory; `K` may be
/// omitted, in which case it is only available when `allow_quadrature` is set.
#[derive(Clone)]
pub struct CustomNonlinearity {
    pub g: ScalarFn,
    pub g_prime: ScalarFn,
    pub big_g: ScalarFn,
    pub k: Option<ScalarFn>,
    pub allow_quadrature: bool,
}

impl fmt::Debug for CustomNonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNonlinearity")
            .field("has_k", &self.k.is_some())
            .field("allow_quadrature", &self.allow_quadrature)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    /// `g(s) = m − s^k`.
    SolerPower {
        k: u32,
    },
    Polynomial(Polynomial),
    Custom(CustomNonlinearity),
}

/// Serializable description of a model, as written in run configs:
/// `{"family":"soler_power","k":1,"m":1.0}` or
/// `{"family":"polynomial","coefficients":[1.0,-1.0,0.1]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    SolerPower { k: u32, m: f64 },
    Polynomial { coefficients: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct NonlinearityModel {
    family: Family,
    mass: f64,
    // cached derived polynomials for the polynomial family
    derived: Option<Box<[Polynomial; 3]>>,
}

impl NonlinearityModel {
    pub fn soler_power(k: u32, m: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidModel("soler_power exponent k must be ≥ 1".into()));
        }
        check_mass(m)?;
        Ok(Self { family: Family::SolerPower { k }, mass: m, derived: None })
    }

    /// Polynomial `g` given by its coefficients; `m = g(0) = coefficients[0]`.
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        let g = Polynomial::new(coefficients);
        let m = g.coefficients.first().copied().unwrap_or(0.0);
        check_mass(m)?;
        if g.coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("non-finite polynomial coefficient".into()));
        }
        let gp = g.derivative();
        let big_g = g.antiderivative();
        let k = gp.shift_up().antiderivative();
        Ok(Self { family: Family::Polynomial(g), mass: m, derived: Some(Box::new([gp, big_g, k])) })
    }

    pub fn custom(custom: CustomNonlinearity) -> Result<Self> {
        let m = (custom.g)(0.0);
        check_mass(m)?;
        Ok(Self { family: Family::Custom(custom), mass: m, derived: None })
    }

    pub fn from_spec(spec: &ModelSpec) -> Result<Self> {
        match spec {
            ModelSpec::SolerPower { k, m } => Self::soler_power(*k, *m),
            ModelSpec::Polynomial { coefficients } => Self::polynomial(coefficients.clone()),
        }
    }

    /// `None` for custom models, which have no serialized form.
    pub fn spec(&self) -> Option<ModelSpec> {
        match &self.family {
            Family::SolerPower { k } => Some(ModelSpec::SolerPower { k: *k, m: self.mass }),
            Family::Polynomial(p) => Some(ModelSpec::Polynomial { coefficients: p.coefficients.clone() }),
            Family::Custom(_) => None,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Short human-readable family label used in file headers.
    pub fn label(&self) -> String {
        match &self.family {
            Family::SolerPower { k } => format!("soler_power(k={k})"),
            Family::Polynomial(p) => format!("polynomial{:?}", p.coefficients),
            Family::Custom(_) => "custom".to_string(),
        }
    }

    pub fn eval(&self, which: ModelFn, s: f64) -> Result<f64> {
        match which {
            ModelFn::G => Ok(self.g(s)),
            ModelFn::GPrime => Ok(self.g_prime(s)),
            ModelFn::BigG => Ok(self.big_g(s)),
            ModelFn::K => self.k(s),
        }
    }

    pub fn g(&self, s: f64) -> f64 {
        match &self.family {
            Family::SolerPower { k } => self.mass - s.powi(*k as i32),
            Family::Polynomial(p) => p.eval(s),
            Family::Custom(c) => (c.g)(s),
        }
    }

    pub fn g_prime(&self, s: f64) -> f64 {
        match &self.family {
            Family::SolerPower { k } => -(*k as f64) * s.powi(*k as i32 - 1),
            Family::Polynomial(_) => self.derived()[0].eval(s),
            Family::Custom(c) => (c.g_prime)(s),
        }
    }

    pub fn big_g(&self, s: f64) -> f64 {
        match &self.family {
            Family::SolerPower { k } => {
                let kp1 = *k as f64 + 1.0;
                self.mass * s - s.powi(*k as i32 + 1) / kp1
            }
            Family::Polynomial(_) => self.derived()[1].eval(s),
            Family::Custom(c) => (c.big_g)(s),
        }
    }

    pub fn k(&self, s: f64) -> Result<f64> {
        match &self.family {
            Family::SolerPower { k } => {
                let kf = *k as f64;
                Ok(-kf * s.powi(*k as i32 + 1) / (kf + 1.0))
            }
            Family::Polynomial(_) => Ok(self.derived()[2].eval(s)),
            Family::Custom(c) => match &c.k {
                Some(k) => Ok(k(s)),
                None if c.allow_quadrature => {
                    let gp = c.g_prime.clone();
                    Ok(gauss_legendre(move |t| t * gp(t), 0.0, s, 64))
                }
                None => Err(Error::AntiderivativeUnavailable(
                    "custom model without K; enable quadrature fallback explicitly",
                )),
            },
        }
    }

    fn derived(&self) -> &[Polynomial; 3] {
        self.derived.as_deref().expect("polynomial family carries derived coefficients")
    }

    /// `(n+1)/n·G(s) − s·g(s)` at one point.
    pub fn gsg_value(&self, s: f64, n: u32) -> f64 {
        let n = n as f64;
        (n + 1.0) / n * self.big_g(s) - s * self.g(s)
    }

    /// True iff `(n+1)/n·G(s) − s·g(s) > 0` at every sample.
    pub fn check_gsg_condition(&self, s_samples: &[f64], n: u32) -> Result<bool> {
        if s_samples.is_empty() {
            return Err(Error::InvalidModel("gsg check needs at least one sample".into()));
        }
        if n == 0 {
            return Err(Error::InvalidModel("spatial dimension must be ≥ 1".into()));
        }
        if s_samples.contains(&0.0) {
            return Err(Error::InvalidModel("gsg samples must exclude s = 0".into()));
        }
        Ok(s_samples.iter().all(|&s| self.gsg_value(s, n) > 0.0))
    }

    /// Scans `count` equispaced points of `[lo, hi]` (skipping zero) and
    /// returns the first one where the gsg inequality fails.
    pub fn find_gsg_violation(&self, n: u32, lo: f64, hi: f64, count: usize) -> Option<f64> {
        let count = count.max(2);
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .filter(|&s| s != 0.0)
            .find(|&s| self.gsg_value(s, n) <= 0.0)
    }
}

fn check_mass(m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("mass g(0) = {m} must be positive")))
    }
}

/// Composite 5-point Gauss–Legendre rule on `panels` equal panels.
pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] =
        [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            NODES.iter().zip(WEIGHTS.iter()).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// Nonlinearity of the wave equation `ψ_tt = ψ_xx − f(ψ)`, a polynomial in ψ
/// with `f(0) = 0`. The default demo is `f(ψ) = ψ − ψ³`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveNonlinearity {
    pub coefficients: Vec<f64>,
}

impl Default for WaveNonlinearity {
    fn default() -> Self {
        Self { coefficients: vec![0.0, 1.0, 0.0, -1.0] }
    }
}

impl WaveNonlinearity {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        match coefficients.first() {
            Some(c) if *c != 0.0 => Err(Error::InvalidModel("wave nonlinearity must vanish at 0".into())),
            _ if coefficients.iter().any(|c| !c.is_finite()) => {
                Err(Error::InvalidModel("non-finite coefficient".into()))
            }
            _ => Ok(Self { coefficients }),
        }
    }

    fn poly(&self) -> Polynomial {
        Polynomial::new(self.coefficients.clone())
    }

    pub fn f(&self, psi: f64) -> f64 {
        self.poly().eval(psi)
    }

    pub fn f_prime(&self, psi: f64) -> f64 {
        self.poly().derivative().eval(psi)
    }

    /// Potential `F(ψ) = ∫₀^ψ f`.
    pub fn potential(&self, psi: f64) -> f64 {
        self.poly().antiderivative().eval(psi)
    }
}
