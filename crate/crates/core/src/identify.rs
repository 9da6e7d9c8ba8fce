//! Identification of the risk-ratio weights from observed data and
//! standardization.
//!
//! Under `Y^{a=0} ⫫ A | V` and consistency, `Pr(V=v | Y^{a=0}=1)` is
//! proportional to `Pr(Y=1 | A=0, V=v)·Pr(V=v)`; the normalizing constant
//! `Pr(Y^{a=0}=1)` never needs to be estimated. None of these functions check
//! exchangeability themselves; under confounding they return the formula's
//! value, which is then simply not the causal quantity.

use num_traits::Zero;

use crate::collapse::WeightVector;
use crate::error::{Error, Result};
use crate::model::{effect_value, EffectMeasureKind, ObservationalTable, RiskPair};
use crate::rational::{Probability, Rational};

fn normalize(labels: Vec<&str>, raw: Vec<Rational>) -> Result<WeightVector> {
    if raw.iter().all(Zero::is_zero) {
        return Err(Error::AllZeroWeights);
    }
    Ok(WeightVector::from_parts(labels, raw)?.normalized())
}

fn baseline_mass(t: &ObservationalTable) -> Result<Vec<Rational>> {
    t.strata()
        .iter()
        .map(|s| Ok(s.r0()?.value() * s.prevalence.value()))
        .collect()
}

/// `Pr(V=v | Y^{a=0}=1)` identified as `∝ Pr(Y=1|A=0,V=v)·Pr(V=v)`.
pub fn identify_rr_minus_weights(t: &ObservationalTable) -> Result<WeightVector> {
    normalize(t.labels().collect(), baseline_mass(t)?)
}

/// Miettinen's weights `Pr(V=v)·Pr(Y=1|A=0,V=v)`, normalized.
pub fn miettinen_weights(t: &ObservationalTable) -> Result<WeightVector> {
    let raw = t
        .strata()
        .iter()
        .map(|s| Ok(s.prevalence.value() * s.r0()?.value()))
        .collect::<Result<Vec<_>>>()?;
    normalize(t.labels().collect(), raw)
}

/// Both arms standardized to the covariate distribution of the whole table:
/// `(Σ Pr(V=v)·r0_v, Σ Pr(V=v)·r1_v)`.
pub fn standardized_risks(t: &ObservationalTable) -> Result<RiskPair> {
    let (mut r0, mut r1) = (Rational::zero(), Rational::zero());
    for s in t.strata() {
        r0 += s.prevalence.value() * s.r0()?.value();
        r1 += s.prevalence.value() * s.r1()?.value();
    }
    Ok(RiskPair::new(Probability::new(r0)?, Probability::new(r1)?))
}

/// Standardized risk ratio: exposed and unexposed risks each standardized to
/// `Pr(V=v)`, then divided.
pub fn miettinen_srr(t: &ObservationalTable) -> Result<Rational> {
    let r = standardized_risks(t)?;
    if r.r0.is_zero() {
        return Err(Error::ZeroDenominator("standardized unexposed risk"));
    }
    Ok(r.r1.value() / r.r0.value())
}

/// Any effect measure on the standardized risks. Avoids averaging stratum
/// effects altogether, so it works for the odds ratio too.
pub fn standardized_effect(kind: EffectMeasureKind, t: &ObservationalTable) -> Result<Rational> {
    effect_value(kind, &standardized_risks(t)?)
}

/// A stratum of a target population in which nobody is exposed, so that the
/// observed outcome is `Y^{a=0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetStratum {
    pub label: String,
    pub prevalence: Probability,
    /// `Pr(Y=1 | V=v)`
    pub risk: Probability,
}

/// `Pr(V=v | Y=1)` in an unexposed target population.
pub fn unexposed_target_weights(strata: &[TargetStratum]) -> Result<WeightVector> {
    let raw = strata
        .iter()
        .map(|s| s.prevalence.value() * s.risk.value())
        .collect();
    normalize(strata.iter().map(|s| s.label.as_str()).collect(), raw)
}
