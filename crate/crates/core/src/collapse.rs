//! Weight schemes and exact collapsibility checks.
//!
//! A measure collapses over the covariate with weights `w` when
//! `Σ w_v·m_v / Σ w_v` equals the marginal measure. The causal check works on
//! counterfactual risks, the associational one on the observed table.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    apply_assignment, check_conditional_exchangeability, check_marginal_exchangeability,
    marginal_effect, stratum_effects, AssignmentMechanism, CounterfactualPopulation,
    EffectMeasureKind, Exchangeability, ObservationalTable, StratumEffect, StratumValue,
};
use crate::rational::{format_rational, Rational};

/// Nonnegative per-stratum weights, at least one positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    entries: Vec<(String, Rational)>,
}

impl WeightVector {
    pub fn new(entries: Vec<(String, Rational)>) -> Result<Self> {
        for (label, w) in &entries {
            if w.is_negative() {
                return Err(Error::NegativeWeight {
                    label: label.clone(),
                    weight: format_rational(w),
                });
            }
        }
        if entries.iter().all(|(_, w)| w.is_zero()) {
            return Err(Error::AllZeroWeights);
        }
        Ok(WeightVector { entries })
    }

    pub fn from_parts<'a>(
        labels: impl IntoIterator<Item = &'a str>,
        weights: impl IntoIterator<Item = Rational>,
    ) -> Result<Self> {
        let labels: Vec<_> = labels.into_iter().collect();
        let weights: Vec<_> = weights.into_iter().collect();
        if labels.len() != weights.len() {
            return Err(Error::LabelMismatch(format!(
                "{} weights for {} strata",
                weights.len(),
                labels.len()
            )));
        }
        Self::new(labels.into_iter().map(str::to_string).zip(weights).collect())
    }

    /// Equal weight on every label.
    pub fn uniform<'a>(labels: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        Self::new(labels.into_iter().map(|l| (l.to_string(), Rational::one())).collect())
            .map(|w| w.normalized())
    }

    pub fn entries(&self) -> &[(String, Rational)] {
        &self.entries
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter().map(|(_, w)| w)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn total(&self) -> Rational {
        self.weights().sum()
    }

    pub fn normalized(&self) -> Self {
        let total = self.total();
        WeightVector {
            entries: self
                .entries
                .iter()
                .map(|(l, w)| (l.clone(), w / &total))
                .collect(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        Self::new(self.entries.iter().map(|(l, w)| (l.clone(), w * factor)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definition {
    /// Over the observed `(A, Y)` distribution.
    Associational,
    /// Over the counterfactual `(Y^{a=0}, Y^{a=1})` distribution.
    Causal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsibilityReport {
    pub definition: Definition,
    pub kind: EffectMeasureKind,
    pub stratum_values: Vec<StratumEffect>,
    pub marginal_value: Rational,
    pub weights: WeightVector,
    pub weighted_average: Rational,
    /// `weighted_average - marginal_value`
    pub residual: Rational,
    pub collapsible: bool,
}

fn build_report(
    definition: Definition,
    kind: EffectMeasureKind,
    stratum_values: Vec<StratumEffect>,
    marginal_value: Rational,
    weights: WeightVector,
) -> Result<CollapsibilityReport> {
    let weighted_average = weighted_average(&stratum_values, &weights)?;
    let residual = &weighted_average - &marginal_value;
    Ok(CollapsibilityReport {
        definition,
        kind,
        collapsible: residual.is_zero(),
        stratum_values,
        marginal_value,
        weights,
        weighted_average,
        residual,
    })
}

/// `Σ w_v·value_v / Σ w_v`. Strata with zero weight may be undefined.
pub fn weighted_average(values: &[StratumEffect], w: &WeightVector) -> Result<Rational> {
    if values.len() != w.entries().len() {
        return Err(Error::LabelMismatch(format!(
            "{} weights for {} strata",
            w.entries().len(),
            values.len()
        )));
    }
    let mut acc = Rational::zero();
    for (effect, (label, weight)) in values.iter().zip(w.entries()) {
        if effect.label != *label {
            return Err(Error::LabelMismatch(format!(
                "weight for {label:?} given where stratum {:?} was expected",
                effect.label
            )));
        }
        if weight.is_zero() {
            continue;
        }
        match &effect.value {
            StratumValue::Defined(v) => acc += weight * v,
            StratumValue::Undefined(_) => return Err(Error::UndefinedStratumValue(label.clone())),
        }
    }
    Ok(acc / w.total())
}

/// The weights under which the causal measure collapses over any covariate:
/// `Pr(V=v)` for the risk difference and `Pr(V=v | event)` for the four risk
/// ratios, where the event is `Y^{a=0}=1`, `Y^{a=0}=0`, `Y^{a=1}=1` or
/// `Y^{a=1}=0` respectively. The odds ratio has none.
pub fn causal_weights(kind: EffectMeasureKind, p: &CounterfactualPopulation) -> Result<WeightVector> {
    let one = Rational::one();
    let (event, factor): (&'static str, fn(&Rational, &Rational, &Rational) -> Rational) = match kind {
        EffectMeasureKind::Rd => return Ok(prevalence_weights(p)),
        EffectMeasureKind::Or => return Err(Error::NoGeneralWeights(kind)),
        EffectMeasureKind::RrMinus => ("Y^{a=0}=1", |_, r0, _| r0.clone()),
        EffectMeasureKind::RrPlus => ("Y^{a=0}=0", |one, r0, _| one - r0),
        EffectMeasureKind::InvRrMinus => ("Y^{a=1}=1", |_, _, r1| r1.clone()),
        EffectMeasureKind::InvRrPlus => ("Y^{a=1}=0", |one, _, r1| one - r1),
    };
    // Bayes: Pr(V=v | E) = Pr(E | V=v) Pr(V=v) / Pr(E)
    let joint: Vec<Rational> = p
        .strata()
        .iter()
        .map(|s| {
            let r = s.risks();
            factor(&one, r.r0.value(), r.r1.value()) * s.prevalence().value()
        })
        .collect();
    let marginal: Rational = joint.iter().sum();
    if marginal.is_zero() {
        return Err(Error::DegenerateConditioningEvent(event));
    }
    WeightVector::from_parts(p.labels(), joint.into_iter().map(|j| j / &marginal))
}

pub fn prevalence_weights(p: &CounterfactualPopulation) -> WeightVector {
    WeightVector::from_parts(p.labels(), p.strata().iter().map(|s| s.prevalence().value().clone()))
        .expect("prevalences sum to 1")
}

pub fn check_causal_collapsibility(
    kind: EffectMeasureKind,
    p: &CounterfactualPopulation,
    weights: Option<&WeightVector>,
) -> Result<CollapsibilityReport> {
    let weights = match weights {
        Some(w) => w.clone(),
        None => causal_weights(kind, p)?,
    };
    let marginal = marginal_effect(kind, p)?;
    build_report(Definition::Causal, kind, stratum_effects(kind, p), marginal, weights)
}

pub fn check_associational_collapsibility(
    kind: EffectMeasureKind,
    t: &ObservationalTable,
    weights: &WeightVector,
) -> Result<CollapsibilityReport> {
    let marginal = t.marginal_effect(kind)?;
    build_report(
        Definition::Associational,
        kind,
        t.stratum_effects(kind),
        marginal,
        weights.clone(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCondition {
    pub name: String,
    pub description: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewmanWeights {
    pub weights: WeightVector,
    /// Sufficient conditions for the weights to collapse the associational
    /// measure; any one holding is enough.
    pub conditions: Vec<NamedCondition>,
}

fn all_equal<'a>(mut values: impl Iterator<Item = &'a Rational>) -> bool {
    match values.next() {
        Some(first) => values.all(|v| v == first),
        None => true,
    }
}

/// Classical associational weights: `Pr(V=v|A=1)` for the risk difference,
/// times `Pr(Y=1|A=0,V=v)` for the risk ratio, and times
/// `Pr(Y=0|A=1,V=v)·odds(Y=1|A=0,V=v)` for the odds ratio.
pub fn newman_weights(kind: EffectMeasureKind, t: &ObservationalTable) -> Result<NewmanWeights> {
    if !matches!(
        kind,
        EffectMeasureKind::Rd | EffectMeasureKind::RrMinus | EffectMeasureKind::Or
    ) {
        return Err(Error::UnsupportedKind(kind));
    }
    let given_exposed = t.covariate_given_exposure(true)?;
    let baseline = t
        .strata()
        .iter()
        .map(|s| s.r0().map(|r| r.value().clone()))
        .collect::<Result<Vec<_>>>()?;

    let one = Rational::one();
    let mut raw = Vec::with_capacity(t.len());
    for ((s, w), r0) in t.strata().iter().zip(&given_exposed).zip(&baseline) {
        let weight = match kind {
            EffectMeasureKind::Rd => w.clone(),
            EffectMeasureKind::RrMinus => w * r0,
            EffectMeasureKind::Or => {
                if w.is_zero() {
                    Rational::zero()
                } else {
                    if *r0 == one {
                        return Err(Error::ZeroDenominator("Pr(Y=0|A=0,V=v)"));
                    }
                    let r1 = s.r1()?.value();
                    w * (&one - r1) * r0 / (&one - r0)
                }
            }
            _ => unreachable!(),
        };
        raw.push(weight);
    }

    let mut conditions = vec![
        NamedCondition {
            name: "covariate-independent-of-outcome-among-unexposed".into(),
            description: "Pr(Y=1|A=0,V=v) is the same in every stratum".into(),
            holds: all_equal(baseline.iter()),
        },
        NamedCondition {
            name: "covariate-independent-of-exposure".into(),
            description: "Pr(A=1|V=v) is the same in every stratum".into(),
            holds: all_equal(t.strata().iter().map(|s| s.p_exposed.value())),
        },
    ];
    if kind == EffectMeasureKind::Or {
        // The OR formula is only guaranteed under a constant baseline risk;
        // independence of V and A alone does not suffice.
        conditions.remove(1);
        conditions[0].name = "constant-baseline-risk".into();
    }
    let weights = WeightVector::from_parts(t.labels(), raw)?.normalized();
    Ok(NewmanWeights { weights, conditions })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub verdict: Verdict,
    /// Present iff feasible; zero outside the strata it combines.
    pub witness: Option<WeightVector>,
    pub min: Rational,
    pub max: Rational,
    pub marginal: Rational,
    /// Labels of strata left out because their value is undefined.
    pub excluded: Vec<String>,
}

/// Decides whether some weight vector averages the stratum values to the
/// marginal value. A weighted mean always lies in the closed hull
/// `[min, max]`, and every point of it is reached by mixing two strata.
pub fn weight_feasibility(values: &[StratumEffect], marginal: &Rational) -> Result<FeasibilityResult> {
    let defined: Vec<(usize, &Rational)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.value.defined().map(|v| (i, v)))
        .collect();
    let excluded = values
        .iter()
        .filter(|e| e.value.defined().is_none())
        .map(|e| e.label.clone())
        .collect();
    let min = defined.iter().map(|(_, v)| *v).min().ok_or(Error::NoDefinedValues)?.clone();
    let max = defined.iter().map(|(_, v)| *v).max().expect("nonempty").clone();

    if *marginal < min || *marginal > max {
        return Ok(FeasibilityResult {
            verdict: Verdict::Infeasible,
            witness: None,
            min,
            max,
            marginal: marginal.clone(),
            excluded,
        });
    }

    let mut weights = vec![Rational::zero(); values.len()];
    if min == max {
        let share = Rational::new(1.into(), defined.len().into());
        for (i, _) in &defined {
            weights[*i] = share.clone();
        }
    } else {
        let (lo, lo_value) = *defined.iter().find(|(_, v)| *v <= marginal).expect("min <= marginal");
        let (hi, hi_value) = *defined.iter().find(|(_, v)| *v >= marginal).expect("max >= marginal");
        if lo == hi {
            weights[lo] = Rational::one();
        } else {
            let span = hi_value - lo_value;
            weights[lo] = (hi_value - marginal) / &span;
            weights[hi] = (marginal - lo_value) / &span;
        }
    }
    let witness = WeightVector::from_parts(values.iter().map(|e| e.label.as_str()), weights)?;
    Ok(FeasibilityResult {
        verdict: Verdict::Feasible,
        witness: Some(witness),
        min,
        max,
        marginal: marginal.clone(),
        excluded,
    })
}

/// Associational against causal values for one stratum (or the margin).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueComparison {
    pub label: String,
    pub causal: StratumValue,
    pub associational: StratumValue,
}

impl ValueComparison {
    pub fn equal(&self) -> bool {
        self.causal == self.associational
    }

    /// `associational - causal` when both are defined.
    pub fn gap(&self) -> Option<Rational> {
        Some(self.associational.defined()? - self.causal.defined()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindComparison {
    pub kind: EffectMeasureKind,
    pub strata: Vec<ValueComparison>,
    pub marginal: ValueComparison,
}

impl KindComparison {
    /// Every value defined on both sides agrees.
    pub fn agrees(&self) -> bool {
        self.strata
            .iter()
            .chain(std::iter::once(&self.marginal))
            .all(|c| c.gap().is_none_or(|g| g.is_zero()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub conditional: Exchangeability,
    pub marginal: Exchangeability,
    pub kinds: Vec<KindComparison>,
}

impl EquivalenceReport {
    pub fn exchangeable(&self) -> bool {
        self.conditional.both() && self.marginal.both()
    }

    pub fn all_agree(&self) -> bool {
        self.kinds.iter().all(KindComparison::agrees)
    }
}

/// Compares associational and causal measures stratum by stratum and at the
/// margin, alongside both exchangeability checks. When both hold every
/// defined pair agrees.
pub fn def_equivalence_check(
    p: &CounterfactualPopulation,
    m: &AssignmentMechanism,
) -> Result<EquivalenceReport> {
    let conditional = check_conditional_exchangeability(p, m)?;
    let marginal = check_marginal_exchangeability(p, m)?;
    let table = apply_assignment(p, m)?;
    let kinds = EffectMeasureKind::ALL
        .into_iter()
        .map(|kind| {
            let strata = stratum_effects(kind, p)
                .into_iter()
                .zip(table.stratum_effects(kind))
                .map(|(c, a)| ValueComparison {
                    label: c.label,
                    causal: c.value,
                    associational: a.value,
                })
                .collect();
            let marginal = ValueComparison {
                label: "(marginal)".into(),
                causal: marginal_effect(kind, p).into(),
                associational: table.marginal_effect(kind).into(),
            };
            KindComparison {
                kind,
                strata,
                marginal,
            }
        })
        .collect();
    Ok(EquivalenceReport {
        conditional,
        marginal,
        kinds,
    })
}
