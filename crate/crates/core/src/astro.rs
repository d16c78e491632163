//! Order-of-magnitude feasibility numbers for graviton to photon conversion
//! around a compact binary merger.
//!
//! Everything is computed with ħ = c = 1, so every quantity is a power of MeV
//! and carries that power as a [`Unit`] tag.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A power of MeV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Unit(pub i32);

impl Unit {
    pub const DIMENSIONLESS: Unit = Unit(0);
    pub const MEV: Unit = Unit(1);
    pub const INV_MEV: Unit = Unit(-1);
    pub const DENSITY: Unit = Unit(3);

    pub fn is_dimensionless(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            1 => write!(f, "MeV"),
            p => write!(f, "MeV^{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }

    pub fn dimensionless(value: f64) -> Self {
        Quantity::new(value, Unit::DIMENSIONLESS)
    }

    pub fn powi(self, k: i32) -> Self {
        Quantity::new(self.value.powi(k), Unit(self.unit.0 * k))
    }

    pub fn scale(self, s: f64) -> Self {
        Quantity::new(self.value * s, self.unit)
    }

    fn expect_unit(self, unit: Unit, what: &str) -> Result<Self> {
        if self.unit != unit {
            return Err(Error::param(format!(
                "{what} must carry unit {unit}, got {}",
                self.unit
            )));
        }
        Ok(self)
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value * rhs.value, Unit(self.unit.0 + rhs.unit.0))
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value / rhs.value, Unit(self.unit.0 - rhs.unit.0))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4e} {}", self.value, self.unit)
    }
}

/// Physical constants and unit conversions. Nothing else in this module
/// hard-codes a physical number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalUnitContext {
    /// 8πG in MeV⁻².
    pub eight_pi_g: f64,
    /// ħ in MeV·s.
    pub hbar_seconds: f64,
    pub mev_per_erg: f64,
    /// How many MeV⁻¹ make one metre.
    pub mev_inverse_meters: f64,
    pub alpha: f64,
    /// Electron mass in MeV.
    pub m_e: f64,
}

impl Default for NaturalUnitContext {
    fn default() -> Self {
        NaturalUnitContext {
            eight_pi_g: 1.5e-43,
            hbar_seconds: 6.582e-22,
            mev_per_erg: 6.2415e5,
            mev_inverse_meters: 5.0677e12,
            alpha: 1.0 / 137.036,
            m_e: 0.511,
        }
    }
}

impl NaturalUnitContext {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eight_pi_g", self.eight_pi_g),
            ("hbar_seconds", self.hbar_seconds),
            ("mev_per_erg", self.mev_per_erg),
            ("mev_inverse_meters", self.mev_inverse_meters),
            ("alpha", self.alpha),
            ("m_e", self.m_e),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn eight_pi_g(&self) -> Quantity {
        Quantity::new(self.eight_pi_g, Unit(-2))
    }

    pub fn newton_g(&self) -> Quantity {
        self.eight_pi_g()
            .scale(1.0 / (8.0 * std::f64::consts::PI))
    }

    /// One second expressed in MeV⁻¹.
    pub fn second(&self) -> Quantity {
        Quantity::new(1.0 / self.hbar_seconds, Unit::INV_MEV)
    }

    pub fn erg(&self) -> Quantity {
        Quantity::new(self.mev_per_erg, Unit::MEV)
    }

    pub fn electron_mass(&self) -> Quantity {
        Quantity::new(self.m_e, Unit::MEV)
    }

    pub fn meters(&self, length: Quantity) -> Result<f64> {
        let l = length.expect_unit(Unit::INV_MEV, "length")?;
        Ok(l.value / self.mev_inverse_meters)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergerScenario {
    #[serde(rename = "luminosity_erg_per_s")]
    pub luminosity: f64,
    #[serde(rename = "frequency_hz")]
    pub frequency: f64,
}

impl MergerScenario {
    /// Peak gravitational-wave luminosity and frequency of the first detected merger.
    pub const FIRST_DETECTION: MergerScenario = MergerScenario {
        luminosity: 3.6e56,
        frequency: 250.0,
    };

    pub fn new(luminosity: f64, frequency: f64) -> Result<Self> {
        let s = MergerScenario {
            luminosity,
            frequency,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.luminosity.is_finite() && self.luminosity > 0.0) {
            return Err(Error::param("luminosity must be positive"));
        }
        check_frequency(self.frequency)
    }
}

fn check_frequency(f: f64) -> Result<()> {
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::param("frequency must be positive"));
    }
    Ok(())
}

fn check_nonnegative(q: Quantity, what: &str) -> Result<()> {
    if !(q.value.is_finite() && q.value >= 0.0) {
        return Err(Error::param(format!("{what} must be non-negative")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProvenanceStep {
    pub name: String,
    pub formula: String,
    pub value: f64,
    pub unit: String,
}

/// Every intermediate value behind an estimate.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub steps: Vec<ProvenanceStep>,
}

impl Provenance {
    fn record(&mut self, name: &str, formula: &str, q: Quantity) -> Quantity {
        self.steps.push(ProvenanceStep {
            name: name.to_string(),
            formula: formula.to_string(),
            value: q.value,
            unit: q.unit.to_string(),
        });
        q
    }

    pub fn get(&self, name: &str) -> Option<&ProvenanceStep> {
        self.steps.iter().find(|s| s.name == name)
    }
}

/// Wavelength λ₁ = c/f in MeV⁻¹.
pub fn wavelength(frequency: f64, ctx: &NaturalUnitContext) -> Result<Quantity> {
    check_frequency(frequency)?;
    Ok(ctx.second().scale(1.0 / frequency))
}

/// Graviton energy 2πfħ in MeV.
pub fn graviton_energy(frequency: f64, ctx: &NaturalUnitContext) -> Result<Quantity> {
    check_frequency(frequency)?;
    Ok(Quantity::new(
        2.0 * std::f64::consts::PI * frequency * ctx.hbar_seconds,
        Unit::MEV,
    ))
}

/// Light-crossing time of the diameter 2λ₁, in MeV⁻¹.
pub fn diameter_crossing_time(frequency: f64, ctx: &NaturalUnitContext) -> Result<Quantity> {
    Ok(wavelength(frequency, ctx)?.scale(2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub value: Quantity,
    pub provenance: Provenance,
}

/// Number density of gravitons inside a sphere of radius one wavelength.
pub fn graviton_density(scenario: &MergerScenario, ctx: &NaturalUnitContext) -> Result<Estimate> {
    scenario.validate()?;
    ctx.validate()?;
    let mut p = Provenance::default();
    let lum = p.record(
        "luminosity",
        "L[erg/s] * erg / s",
        ctx.erg()
            .scale(scenario.luminosity)
            .div(ctx.second()),
    );
    let lambda1 = p.record("wavelength", "lambda1 = 1 / f", wavelength(scenario.frequency, ctx)?);
    p.record(
        "wavelength_m",
        "lambda1 / (MeV^-1 per m)",
        Quantity::dimensionless(ctx.meters(lambda1)?),
    );
    let energy = p.record("sphere_energy", "E_sphere = L * lambda1", lum * lambda1);
    let quantum = p.record(
        "graviton_energy",
        "E_graviton = 2 pi f hbar",
        graviton_energy(scenario.frequency, ctx)?,
    );
    let count = p.record("graviton_count", "N = E_sphere / E_graviton", energy / quantum);
    let volume = p.record(
        "sphere_volume",
        "V = (4/3) pi lambda1^3",
        lambda1.powi(3).scale(4.0 / 3.0 * std::f64::consts::PI),
    );
    let n = p.record("graviton_density", "n = N / V", count / volume);
    Ok(Estimate {
        value: n.expect_unit(Unit::DENSITY, "graviton density")?,
        provenance: p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XiEstimate {
    pub xi: f64,
    pub turnover_capable: bool,
    pub provenance: Provenance,
}

/// ξ = 8πG·n·T. Turnover needs ξ ≥ 1.
pub fn xi_figure_of_merit(
    density: Quantity,
    duration: Quantity,
    ctx: &NaturalUnitContext,
) -> Result<XiEstimate> {
    ctx.validate()?;
    let n = density.expect_unit(Unit::DENSITY, "density")?;
    let t = duration.expect_unit(Unit::INV_MEV, "duration")?;
    check_nonnegative(n, "density")?;
    check_nonnegative(t, "duration")?;
    let mut p = Provenance::default();
    p.record("eight_pi_g", "8 pi G", ctx.eight_pi_g());
    p.record("density", "n", n);
    p.record("duration", "T", t);
    let xi = p.record("xi", "xi = 8 pi G n T", ctx.eight_pi_g() * n * t);
    let xi = xi.expect_unit(Unit::DIMENSIONLESS, "xi")?;
    Ok(XiEstimate {
        xi: xi.value,
        turnover_capable: xi.value >= 1.0,
        provenance: p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockingEstimate {
    /// Photon density n_γ* above which photon-photon refraction blocks conversion.
    pub threshold: Quantity,
    pub threshold_exceeds_graviton_density: bool,
    /// `true` iff n_γ* ≤ n_gr.
    pub parity_reachable: bool,
    pub provenance: Provenance,
}

pub fn blocking_threshold(
    graviton_density: Quantity,
    photon_energy: Quantity,
    ctx: &NaturalUnitContext,
) -> Result<BlockingEstimate> {
    ctx.validate()?;
    let n_gr = graviton_density.expect_unit(Unit::DENSITY, "graviton density")?;
    let e = photon_energy.expect_unit(Unit::MEV, "photon energy")?;
    if !(n_gr.value > 0.0 && e.value > 0.0) {
        return Err(Error::param("density and photon energy must be positive"));
    }
    let mut p = Provenance::default();
    let num = p.record(
        "numerator",
        "8 pi G n_gr m_e^4",
        ctx.eight_pi_g() * n_gr * ctx.electron_mass().powi(4),
    );
    let den = p.record(
        "denominator",
        "0.1 alpha^2 E^2",
        e.powi(2).scale(0.1 * ctx.alpha * ctx.alpha),
    );
    let threshold = p.record("threshold", "n_gamma* = numerator / denominator", num / den);
    let threshold = threshold.expect_unit(Unit::DENSITY, "blocking threshold")?;
    Ok(BlockingEstimate {
        threshold,
        threshold_exceeds_graviton_density: threshold.value > n_gr.value,
        parity_reachable: threshold.value <= n_gr.value,
        provenance: p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncoherentEstimate {
    /// G⁻¹λ₁², dimensionless.
    pub ratio: f64,
    pub exponent: f64,
    /// Same exponent accumulated as a sum of log10 factors.
    pub exponent_log_path: f64,
    pub provenance: Provenance,
}

/// How much slower incoherent single-graviton conversion is than the coherent rate.
pub fn incoherent_comparison(frequency: f64, ctx: &NaturalUnitContext) -> Result<IncoherentEstimate> {
    ctx.validate()?;
    let mut p = Provenance::default();
    let g = p.record("newton_g", "G = (8 pi G) / (8 pi)", ctx.newton_g());
    let lambda1 = p.record("wavelength", "lambda1 = 1 / f", wavelength(frequency, ctx)?);
    let ratio = p.record("ratio", "G^-1 lambda1^2", lambda1.powi(2) / g);
    let ratio = ratio.expect_unit(Unit::DIMENSIONLESS, "incoherent ratio")?;
    let exponent_log_path = 2.0 * (-(frequency.log10()) - ctx.hbar_seconds.log10())
        - (ctx.eight_pi_g.log10() - (8.0 * std::f64::consts::PI).log10());
    Ok(IncoherentEstimate {
        ratio: ratio.value,
        exponent: ratio.value.log10(),
        exponent_log_path,
        provenance: p,
    })
}

/// Every number of the feasibility estimate for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub scenario: MergerScenario,
    pub context: NaturalUnitContext,
    pub density: Estimate,
    pub crossing_time: Quantity,
    pub xi: XiEstimate,
    pub blocking: BlockingEstimate,
    pub incoherent: IncoherentEstimate,
}

impl FeasibilityReport {
    pub fn verdict(&self) -> String {
        format!(
            "n = {:.3e} MeV^3, xi = {:.3e} ({}), blocking n_gamma* = {:.3e} MeV^3, incoherent ratio 10^{:.1}",
            self.density.value.value,
            self.xi.xi,
            if self.xi.turnover_capable {
                "turnover-capable"
            } else {
                "below turnover threshold"
            },
            self.blocking.threshold.value,
            self.incoherent.exponent
        )
    }
}

/// Density, ξ over the diameter crossing time, blocking threshold at the
/// graviton energy, and the incoherent comparison.
pub fn feasibility_report(
    scenario: &MergerScenario,
    ctx: &NaturalUnitContext,
) -> Result<FeasibilityReport> {
    let density = graviton_density(scenario, ctx)?;
    let crossing_time = diameter_crossing_time(scenario.frequency, ctx)?;
    let xi = xi_figure_of_merit(density.value, crossing_time, ctx)?;
    let blocking = blocking_threshold(
        density.value,
        graviton_energy(scenario.frequency, ctx)?,
        ctx,
    )?;
    let incoherent = incoherent_comparison(scenario.frequency, ctx)?;
    Ok(FeasibilityReport {
        scenario: *scenario,
        context: *ctx,
        density,
        crossing_time,
        xi,
        blocking,
        incoherent,
    })
}
