//! Physical parameters of a charged particle in a magnetic field `B` around a
//! conical disclination, with a self-interaction of strength `κ`, and their
//! reduction to the dimensionless pair `(γ, a)`.
//!
//! With `L = √(2cαħ/(|q|B))` and `ξ = r/L`, the radial equation becomes the
//! one solved in this crate, with
//!
//! ```text
//! γ = |l|/α
//! a = (m* q² κ / (π ε ħ²)) √(cαħ/(2|q|B))
//! W = 4 m* c α E / (ħ |q| B) - k² + 2 sign(q) l / α
//! ```
//!
//! All quantities must be given in one coherent unit system; nothing here
//! assumes `ħ = c = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::truncation_spectrum;

/// Everything except the field strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisclinationSetup {
    pub m_star: f64,
    /// Signed charge, nonzero.
    pub q: f64,
    /// Disclination parameter.
    pub alpha: f64,
    /// Signed self-interaction constant.
    pub kappa: f64,
    pub epsilon: f64,
    pub hbar: f64,
    pub c: f64,
    /// Angular quantum number.
    pub l: i64,
    /// Axial wavenumber.
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisclinationParams {
    #[serde(flatten)]
    pub setup: DisclinationSetup,
    /// Magnetic field strength.
    pub b: f64,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {v} must be positive and finite")))
    }
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {v} must be finite")))
    }
}

impl DisclinationSetup {
    pub fn validate(&self) -> Result<()> {
        require_positive("m_star", self.m_star)?;
        require_positive("alpha", self.alpha)?;
        require_positive("epsilon", self.epsilon)?;
        require_positive("hbar", self.hbar)?;
        require_positive("c", self.c)?;
        require_finite("q", self.q)?;
        require_finite("kappa", self.kappa)?;
        require_finite("k", self.k)?;
        if self.q == 0.0 {
            return Err(Error::invalid("q must be nonzero"));
        }
        Ok(())
    }

    pub fn with_field(self, b: f64) -> Result<DisclinationParams> {
        let p = DisclinationParams { setup: self, b };
        p.validate()?;
        Ok(p)
    }

    pub fn gamma(&self) -> f64 {
        self.l.unsigned_abs() as f64 / self.alpha
    }

    /// `m* q² κ / (π ε ħ²)`, so that `a = coupling · √(cαħ/(2|q|B))`.
    fn coupling(&self) -> f64 {
        self.m_star * self.q * self.q * self.kappa / (std::f64::consts::PI * self.epsilon * self.hbar * self.hbar)
    }

    /// `2 sign(q) l / α`, the angular shift in the `W`–`E` relation.
    fn angular_shift(&self) -> f64 {
        2.0 * self.q.signum() * self.l as f64 / self.alpha
    }
}

impl DisclinationParams {
    pub fn validate(&self) -> Result<()> {
        self.setup.validate()?;
        require_positive("B", self.b)
    }
}

/// Dimensionless image of one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessImage {
    /// `L`, with `r = L ξ`.
    pub length_unit: f64,
    pub gamma: f64,
    pub a: f64,
    /// `W = energy_scale · E + energy_offset`.
    pub energy_scale: f64,
    pub energy_offset: f64,
}

impl DimensionlessImage {
    pub fn w_from_energy(&self, e: f64) -> f64 {
        self.energy_scale * e + self.energy_offset
    }

    pub fn energy_from_w(&self, w: f64) -> f64 {
        (w - self.energy_offset) / self.energy_scale
    }
}

pub fn to_dimensionless(p: &DisclinationParams) -> Result<DimensionlessImage> {
    p.validate()?;
    let s = &p.setup;
    let qb = s.q.abs() * p.b;
    Ok(DimensionlessImage {
        length_unit: (2.0 * s.c * s.alpha * s.hbar / qb).sqrt(),
        gamma: s.gamma(),
        a: s.coupling() * (s.c * s.alpha * s.hbar / (2.0 * qb)).sqrt(),
        energy_scale: 4.0 * s.m_star * s.c * s.alpha / (s.hbar * qb),
        energy_offset: s.angular_shift() - s.k * s.k,
    })
}

/// Energy of the state with dimensionless eigenvalue `w`.
pub fn energy_from_w(p: &DisclinationParams, w: f64) -> Result<f64> {
    Ok(to_dimensionless(p)?.energy_from_w(w))
}

/// Field strength at which the model has coupling `a`, if any. `a` must be
/// nonzero and share the sign of `κ`.
pub fn field_for_coupling(setup: &DisclinationSetup, a: f64) -> Option<f64> {
    let coupling = setup.coupling();
    if a == 0.0 || coupling == 0.0 || a.signum() != coupling.signum() || !a.is_finite() {
        return None;
    }
    let ratio = coupling / a;
    Some(setup.c * setup.alpha * setup.hbar * ratio * ratio / (2.0 * setup.q.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllowedField {
    /// 1-based root index.
    pub k: usize,
    pub a_root: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscardedRoot {
    pub k: usize,
    pub a_root: f64,
    pub reason: String,
}

/// Field strengths at which the truncated series of degree `n` applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllowedFields {
    pub n: usize,
    pub gamma: f64,
    pub w: f64,
    /// Ascending in root index, hence descending in `B` for `κ > 0`.
    pub fields: Vec<AllowedField>,
    pub discarded: Vec<DiscardedRoot>,
}

/// Maps each truncation root `a^{(k)}` for degree `n` and `γ = |l|/α` back to a
/// field strength.
///
/// These are only the fields where a polynomial solution exists. Bound
/// states exist at every other `B` too.
pub fn allowed_field_strengths(setup: &DisclinationSetup, n: usize) -> Result<AllowedFields> {
    setup.validate()?;
    let gamma = setup.gamma();
    let sol = truncation_spectrum(n, gamma)?;
    let mut fields = Vec::new();
    let mut discarded = Vec::new();
    for (idx, &a_root) in sol.roots.roots.iter().enumerate() {
        let k = idx + 1;
        match field_for_coupling(setup, a_root) {
            Some(b) => fields.push(AllowedField { k, a_root, b }),
            None => {
                let reason = if setup.kappa == 0.0 {
                    "kappa = 0 gives a = 0 for every field"
                } else if a_root == 0.0 {
                    "a = 0 requires an infinite field"
                } else {
                    "sign of a is incompatible with the sign of kappa"
                };
                discarded.push(DiscardedRoot {
                    k,
                    a_root,
                    reason: reason.to_string(),
                });
            }
        }
    }
    Ok(AllowedFields {
        n,
        gamma,
        w: sol.w,
        fields,
        discarded,
    })
}
