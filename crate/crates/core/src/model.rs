//! Counterfactual populations, observational tables and the six effect
//! measures.
//!
//! A [`CounterfactualPopulation`] carries, for each level of the covariate,
//! its prevalence and the joint law of `(Y^{a=0}, Y^{a=1})`. Running an
//! [`AssignmentMechanism`] over it through [`apply_assignment`] produces the
//! [`ObservationalTable`] an investigator would see. All arithmetic is exact.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Probability, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectMeasureKind {
    /// `r1 - r0`
    Rd,
    /// `r1 / r0`
    RrMinus,
    /// `(1 - r1) / (1 - r0)`
    RrPlus,
    /// `r0 / r1`
    InvRrMinus,
    /// `(1 - r0) / (1 - r1)`
    InvRrPlus,
    /// `[r1 / (1 - r1)] / [r0 / (1 - r0)]`
    Or,
}

impl EffectMeasureKind {
    pub const ALL: [EffectMeasureKind; 6] = [
        EffectMeasureKind::Rd,
        EffectMeasureKind::RrMinus,
        EffectMeasureKind::RrPlus,
        EffectMeasureKind::InvRrMinus,
        EffectMeasureKind::InvRrPlus,
        EffectMeasureKind::Or,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EffectMeasureKind::Rd => "rd",
            EffectMeasureKind::RrMinus => "rr-minus",
            EffectMeasureKind::RrPlus => "rr-plus",
            EffectMeasureKind::InvRrMinus => "inv-rr-minus",
            EffectMeasureKind::InvRrPlus => "inv-rr-plus",
            EffectMeasureKind::Or => "or",
        }
    }

    /// The value every stratum takes when exposure has no effect.
    pub fn null_value(self) -> Rational {
        match self {
            EffectMeasureKind::Rd => Rational::zero(),
            _ => Rational::one(),
        }
    }
}

impl fmt::Display for EffectMeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EffectMeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        EffectMeasureKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Risks of the outcome under no exposure (`r0`) and exposure (`r1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskPair {
    pub r0: Probability,
    pub r1: Probability,
}

impl RiskPair {
    pub fn new(r0: Probability, r1: Probability) -> Self {
        RiskPair { r0, r1 }
    }
}

/// Evaluates an effect measure on a pair of risks.
pub fn effect_value(kind: EffectMeasureKind, r: &RiskPair) -> Result<Rational> {
    let one = Rational::one();
    let (r0, r1) = (r.r0.value(), r.r1.value());
    let undefined = |denominator| Error::UndefinedMeasure { kind, denominator };
    match kind {
        EffectMeasureKind::Rd => Ok(r1 - r0),
        EffectMeasureKind::RrMinus => {
            if r0.is_zero() {
                return Err(undefined("r0 = 0"));
            }
            Ok(r1 / r0)
        }
        EffectMeasureKind::RrPlus => {
            if *r0 == one {
                return Err(undefined("r0 = 1"));
            }
            Ok((&one - r1) / (&one - r0))
        }
        EffectMeasureKind::InvRrMinus => {
            if r1.is_zero() {
                return Err(undefined("r1 = 0"));
            }
            Ok(r0 / r1)
        }
        EffectMeasureKind::InvRrPlus => {
            if *r1 == one {
                return Err(undefined("r1 = 1"));
            }
            Ok((&one - r0) / (&one - r1))
        }
        EffectMeasureKind::Or => {
            if r0.is_zero() || *r0 == one {
                return Err(undefined("r0 not in (0, 1)"));
            }
            if r1.is_zero() || *r1 == one {
                return Err(undefined("r1 not in (0, 1)"));
            }
            let odds1 = r1 / (&one - r1);
            let odds0 = r0 / (&one - r0);
            Ok(odds1 / odds0)
        }
    }
}

/// A per-stratum result that may be undefined without failing the whole list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratumValue {
    Defined(Rational),
    Undefined(String),
}

impl StratumValue {
    pub fn defined(&self) -> Option<&Rational> {
        match self {
            StratumValue::Defined(v) => Some(v),
            StratumValue::Undefined(_) => None,
        }
    }
}

impl From<Result<Rational>> for StratumValue {
    fn from(r: Result<Rational>) -> Self {
        match r {
            Ok(v) => StratumValue::Defined(v),
            Err(e) => StratumValue::Undefined(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumEffect {
    pub label: String,
    pub value: StratumValue,
}

/// Joint law of `(Y^{a=0}, Y^{a=1})`, indexed `[y0][y1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Joint([[Probability; 2]; 2]);

impl Joint {
    pub fn new(q00: Probability, q01: Probability, q10: Probability, q11: Probability) -> Self {
        Joint([[q00, q01], [q10, q11]])
    }

    /// Independent coupling of the two counterfactual margins.
    pub fn independent(risk0: &Probability, risk1: &Probability) -> Self {
        let p = |a: &Rational, b: &Rational| Probability::new(a * b).expect("product of probabilities");
        let (n0, n1) = (risk0.complement(), risk1.complement());
        Joint([
            [p(&n0, &n1), p(&n0, risk1)],
            [p(risk0, &n1), p(risk0, risk1)],
        ])
    }

    pub fn get(&self, y0: usize, y1: usize) -> &Probability {
        &self.0[y0][y1]
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().flatten().map(|q| q.value()).sum()
    }

    pub fn risk0(&self) -> Rational {
        self.get(1, 0).value() + self.get(1, 1).value()
    }

    pub fn risk1(&self) -> Rational {
        self.get(0, 1).value() + self.get(1, 1).value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterfactualStratum {
    label: String,
    prevalence: Probability,
    joint: Joint,
}

impl CounterfactualStratum {
    pub fn new(label: impl Into<String>, prevalence: Probability, joint: Joint) -> Result<Self> {
        let label = label.into();
        let sum = joint.sum();
        if !sum.is_one() {
            return Err(Error::JointSum {
                label,
                sum: format_rational(&sum),
            });
        }
        Ok(CounterfactualStratum {
            label,
            prevalence,
            joint,
        })
    }

    /// Builds the stratum from its two counterfactual risks, coupling them
    /// independently.
    pub fn independent(
        label: impl Into<String>,
        prevalence: Probability,
        risk0: Probability,
        risk1: Probability,
    ) -> Self {
        let joint = Joint::independent(&risk0, &risk1);
        CounterfactualStratum::new(label, prevalence, joint).expect("independent coupling sums to 1")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn prevalence(&self) -> &Probability {
        &self.prevalence
    }

    pub fn joint(&self) -> &Joint {
        &self.joint
    }

    pub fn risks(&self) -> RiskPair {
        RiskPair {
            r0: Probability::new(self.joint.risk0()).expect("margin of a valid joint"),
            r1: Probability::new(self.joint.risk1()).expect("margin of a valid joint"),
        }
    }

    /// Feasible range of `Pr(Y^{a=0}=1, Y^{a=1}=1)` given the two margins.
    pub fn coupling_bounds(&self) -> (Rational, Rational) {
        let (r0, r1) = (self.joint.risk0(), self.joint.risk1());
        let lo = (&r0 + &r1 - Rational::one()).max(Rational::zero());
        let hi = r0.min(r1);
        (lo, hi)
    }

    /// Same margins, different coupling: `both` is the new mass on
    /// `(y0, y1) = (1, 1)`.
    pub fn recoupled(&self, both: Rational) -> Result<Self> {
        let (r0, r1) = (self.joint.risk0(), self.joint.risk1());
        let q10 = &r0 - &both;
        let q01 = &r1 - &both;
        let q00 = Rational::one() - &r0 - &r1 + &both;
        let joint = Joint::new(
            Probability::new(q00)?,
            Probability::new(q01)?,
            Probability::new(q10)?,
            Probability::new(both)?,
        );
        CounterfactualStratum::new(self.label.clone(), self.prevalence.clone(), joint)
    }
}

pub fn stratum_risks(s: &CounterfactualStratum) -> RiskPair {
    s.risks()
}

/// Unvalidated stratum as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStratum {
    pub label: String,
    pub prevalence: Rational,
    /// `[y0][y1]`
    pub joint: [[Rational; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    ZeroPrevalenceDropped(String),
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::ZeroPrevalenceDropped(label) => {
                write!(f, "stratum {label:?} has prevalence 0 and was dropped")
            }
        }
    }
}

fn check_labels<'a>(labels: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for label in labels {
        if !seen.insert(label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
    }
    Ok(())
}

fn check_prevalence_sum<'a>(prevalences: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let sum: Rational = prevalences.sum();
    if !sum.is_one() {
        return Err(Error::PrevalenceSum(format_rational(&sum)));
    }
    Ok(())
}

/// Validates a raw stratum list. Strata with prevalence exactly 0 are dropped
/// and reported as warnings.
pub fn validate_population(
    raw: Vec<RawStratum>,
) -> Result<(CounterfactualPopulation, Vec<ValidationWarning>)> {
    let strata = raw
        .into_iter()
        .map(|r| {
            let [[q00, q01], [q10, q11]] = r.joint;
            let joint = Joint::new(
                Probability::new(q00)?,
                Probability::new(q01)?,
                Probability::new(q10)?,
                Probability::new(q11)?,
            );
            CounterfactualStratum::new(r.label, Probability::new(r.prevalence)?, joint)
        })
        .collect::<Result<Vec<_>>>()?;
    CounterfactualPopulation::from_strata(strata)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterfactualPopulation {
    strata: Vec<CounterfactualStratum>,
}

impl CounterfactualPopulation {
    pub fn from_strata(
        strata: Vec<CounterfactualStratum>,
    ) -> Result<(Self, Vec<ValidationWarning>)> {
        if strata.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        check_labels(strata.iter().map(|s| s.label()))?;
        check_prevalence_sum(strata.iter().map(|s| s.prevalence().value()))?;
        let (kept, dropped): (Vec<_>, Vec<_>) =
            strata.into_iter().partition(|s| !s.prevalence().is_zero());
        let warnings = dropped
            .into_iter()
            .map(|s| ValidationWarning::ZeroPrevalenceDropped(s.label))
            .collect();
        Ok((CounterfactualPopulation { strata: kept }, warnings))
    }

    /// [`from_strata`](Self::from_strata) without the warnings.
    pub fn new(strata: Vec<CounterfactualStratum>) -> Result<Self> {
        Self::from_strata(strata).map(|(p, _)| p)
    }

    pub fn strata(&self) -> &[CounterfactualStratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.strata.iter().map(|s| s.label())
    }

    /// Replaces stratum joints, keeping everything else. Used to vary the
    /// coupling while holding margins fixed.
    pub fn map_strata(
        &self,
        f: impl FnMut(&CounterfactualStratum) -> Result<CounterfactualStratum>,
    ) -> Result<Self> {
        let strata = self.strata.iter().map(f).collect::<Result<Vec<_>>>()?;
        CounterfactualPopulation::new(strata)
    }
}

/// Law of total probability over the strata.
pub fn marginal_risks(p: &CounterfactualPopulation) -> RiskPair {
    let (mut r0, mut r1) = (Rational::zero(), Rational::zero());
    for s in p.strata() {
        let w = s.prevalence().value();
        r0 += w * s.joint().risk0();
        r1 += w * s.joint().risk1();
    }
    RiskPair {
        r0: Probability::new(r0).expect("mixture of probabilities"),
        r1: Probability::new(r1).expect("mixture of probabilities"),
    }
}

pub fn stratum_effects(kind: EffectMeasureKind, p: &CounterfactualPopulation) -> Vec<StratumEffect> {
    p.strata()
        .iter()
        .map(|s| StratumEffect {
            label: s.label().to_string(),
            value: effect_value(kind, &s.risks()).into(),
        })
        .collect()
}

pub fn marginal_effect(kind: EffectMeasureKind, p: &CounterfactualPopulation) -> Result<Rational> {
    effect_value(kind, &marginal_risks(p))
}

/// `Pr(A=1 | V=v, Y^{a=0}=y0, Y^{a=1}=y1)`.
///
/// Cells not set explicitly fall back to the constant, when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AssignmentMechanism {
    constant: Option<Probability>,
    cells: BTreeMap<String, [[Option<Probability>; 2]; 2]>,
}

impl AssignmentMechanism {
    pub fn constant(p: Probability) -> Self {
        AssignmentMechanism {
            constant: Some(p),
            cells: BTreeMap::new(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn default_probability(&self) -> Option<&Probability> {
        self.constant.as_ref()
    }

    pub fn set(&mut self, label: &str, y0: usize, y1: usize, p: Probability) -> &mut Self {
        self.cells.entry(label.to_string()).or_default()[y0][y1] = Some(p);
        self
    }

    /// Same probability for all four potential-outcome cells of a stratum.
    pub fn set_stratum(&mut self, label: &str, p: Probability) -> &mut Self {
        for y0 in 0..2 {
            for y1 in 0..2 {
                self.set(label, y0, y1, p.clone());
            }
        }
        self
    }

    /// Probability depending only on `Y^{a=0}` within a stratum.
    pub fn set_by_untreated_outcome(
        &mut self,
        label: &str,
        if_y0_is_0: Probability,
        if_y0_is_1: Probability,
    ) -> &mut Self {
        for y1 in 0..2 {
            self.set(label, 0, y1, if_y0_is_0.clone());
            self.set(label, 1, y1, if_y0_is_1.clone());
        }
        self
    }

    pub fn pi(&self, label: &str, y0: usize, y1: usize) -> Option<&Probability> {
        self.cells
            .get(label)
            .and_then(|c| c[y0][y1].as_ref())
            .or(self.constant.as_ref())
    }

    /// Explicit per-stratum cells, in label order.
    pub fn explicit_cells(&self) -> impl Iterator<Item = (&str, usize, usize, &Probability)> {
        self.cells.iter().flat_map(|(label, c)| {
            (0..2).flat_map(move |y0| {
                (0..2).filter_map(move |y1| c[y0][y1].as_ref().map(|p| (label.as_str(), y0, y1, p)))
            })
        })
    }

    fn cell(&self, label: &str, y0: usize, y1: usize) -> Result<&Probability> {
        self.pi(label, y0, y1)
            .ok_or_else(|| Error::MechanismUndefined(label.to_string()))
    }

    fn stratum_cells(&self, label: &str) -> Result<[[&Probability; 2]; 2]> {
        Ok([
            [self.cell(label, 0, 0)?, self.cell(label, 0, 1)?],
            [self.cell(label, 1, 0)?, self.cell(label, 1, 1)?],
        ])
    }

    pub fn covers(&self, p: &CounterfactualPopulation) -> Result<()> {
        for label in p.labels() {
            self.stratum_cells(label)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedStratum {
    pub label: String,
    pub prevalence: Probability,
    /// `Pr(A=1 | V=v)`
    pub p_exposed: Probability,
    /// `Pr(Y=1 | A=0, V=v)`, absent when nobody in the stratum is unexposed.
    pub r0: Option<Probability>,
    /// `Pr(Y=1 | A=1, V=v)`, absent when nobody in the stratum is exposed.
    pub r1: Option<Probability>,
}

impl ObservedStratum {
    pub fn r0(&self) -> Result<&Probability> {
        self.r0.as_ref().ok_or_else(|| Error::AbsentCell {
            label: self.label.clone(),
            cell: "Pr(Y=1|A=0)",
        })
    }

    pub fn r1(&self) -> Result<&Probability> {
        self.r1.as_ref().ok_or_else(|| Error::AbsentCell {
            label: self.label.clone(),
            cell: "Pr(Y=1|A=1)",
        })
    }

    pub fn risks(&self) -> Result<RiskPair> {
        Ok(RiskPair::new(self.r0()?.clone(), self.r1()?.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationalTable {
    strata: Vec<ObservedStratum>,
}

impl ObservationalTable {
    /// Checks labels, the prevalence sum and that no risk is given for an
    /// empty exposure arm. Zero-prevalence rows are dropped with a warning.
    pub fn validate(strata: Vec<ObservedStratum>) -> Result<(Self, Vec<ValidationWarning>)> {
        if strata.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        check_labels(strata.iter().map(|s| s.label.as_str()))?;
        check_prevalence_sum(strata.iter().map(|s| s.prevalence.value()))?;
        for s in &strata {
            let inconsistent = |message: &str| Error::InconsistentCell {
                label: s.label.clone(),
                message: message.to_string(),
            };
            if s.p_exposed.is_one() && s.r0.is_some() {
                return Err(inconsistent("r0 given but Pr(A=0|V=v) = 0"));
            }
            if s.p_exposed.is_zero() && s.r1.is_some() {
                return Err(inconsistent("r1 given but Pr(A=1|V=v) = 0"));
            }
        }
        let (kept, dropped): (Vec<_>, Vec<_>) =
            strata.into_iter().partition(|s| !s.prevalence.is_zero());
        let warnings = dropped
            .into_iter()
            .map(|s| ValidationWarning::ZeroPrevalenceDropped(s.label))
            .collect();
        Ok((ObservationalTable { strata: kept }, warnings))
    }

    pub fn new(strata: Vec<ObservedStratum>) -> Result<Self> {
        Self::validate(strata).map(|(t, _)| t)
    }

    pub fn strata(&self) -> &[ObservedStratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.strata.iter().map(|s| s.label.as_str())
    }

    /// `Pr(A=1)`
    pub fn marginal_exposure(&self) -> Rational {
        self.strata
            .iter()
            .map(|s| s.prevalence.value() * s.p_exposed.value())
            .sum()
    }

    /// `Pr(V=v | A=a)` for every stratum.
    pub fn covariate_given_exposure(&self, exposed: bool) -> Result<Vec<Rational>> {
        let arm = |s: &ObservedStratum| {
            if exposed {
                s.p_exposed.value().clone()
            } else {
                s.p_exposed.complement().into_inner()
            }
        };
        let total: Rational = self.strata.iter().map(|s| s.prevalence.value() * arm(s)).sum();
        if total.is_zero() {
            return Err(Error::ZeroDenominator(if exposed { "Pr(A=1)" } else { "Pr(A=0)" }));
        }
        Ok(self
            .strata
            .iter()
            .map(|s| s.prevalence.value() * arm(s) / &total)
            .collect())
    }

    /// Crude risks `Pr(Y=1 | A=a)` of the collapsed table.
    pub fn marginal_risks(&self) -> Result<RiskPair> {
        let mix = |exposed: bool| -> Result<Probability> {
            let weights = self.covariate_given_exposure(exposed)?;
            let mut acc = Rational::zero();
            for (s, w) in self.strata.iter().zip(weights) {
                if w.is_zero() {
                    continue;
                }
                let r = if exposed { s.r1()? } else { s.r0()? };
                acc += w * r.value();
            }
            Probability::new(acc)
        };
        Ok(RiskPair::new(mix(false)?, mix(true)?))
    }

    pub fn stratum_effects(&self, kind: EffectMeasureKind) -> Vec<StratumEffect> {
        self.strata
            .iter()
            .map(|s| StratumEffect {
                label: s.label.clone(),
                value: s.risks().and_then(|r| effect_value(kind, &r)).into(),
            })
            .collect()
    }

    pub fn marginal_effect(&self, kind: EffectMeasureKind) -> Result<Rational> {
        effect_value(kind, &self.marginal_risks()?)
    }
}

/// Generates observed data from counterfactuals via consistency `Y = Y^A`.
pub fn apply_assignment(
    p: &CounterfactualPopulation,
    m: &AssignmentMechanism,
) -> Result<ObservationalTable> {
    let mut strata = Vec::with_capacity(p.len());
    for s in p.strata() {
        let pi = m.stratum_cells(s.label())?;
        let q = s.joint();
        let mut exposed = Rational::zero();
        let mut exposed_cases = Rational::zero();
        let mut unexposed_cases = Rational::zero();
        for y0 in 0..2 {
            for y1 in 0..2 {
                let treated = q.get(y0, y1).value() * pi[y0][y1].value();
                let untreated = q.get(y0, y1).value() * pi[y0][y1].complement().value();
                if y1 == 1 {
                    exposed_cases += &treated;
                }
                if y0 == 1 {
                    unexposed_cases += &untreated;
                }
                exposed += treated;
            }
        }
        let unexposed = Rational::one() - &exposed;
        let r1 = (!exposed.is_zero()).then(|| Probability::new(exposed_cases / &exposed)).transpose()?;
        let r0 = (!unexposed.is_zero())
            .then(|| Probability::new(unexposed_cases / &unexposed))
            .transpose()?;
        strata.push(ObservedStratum {
            label: s.label().to_string(),
            prevalence: s.prevalence().clone(),
            p_exposed: Probability::new(exposed)?,
            r0,
            r1,
        });
    }
    ObservationalTable::new(strata)
}

/// Whether `Y^{a} ⫫ A` holds for `a = 0` and `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchangeability {
    pub a0: bool,
    pub a1: bool,
}

impl Exchangeability {
    pub fn both(&self) -> bool {
        self.a0 && self.a1
    }
}

/// Sums of `q` and `q·pi` over the cells where the chosen counterfactual
/// equals 0 and 1: `[(mass, treated mass); 2]`.
fn arm_masses(
    s: &CounterfactualStratum,
    pi: &[[&Probability; 2]; 2],
    under_exposure: bool,
) -> [(Rational, Rational); 2] {
    let mut out = [(Rational::zero(), Rational::zero()), (Rational::zero(), Rational::zero())];
    for y0 in 0..2 {
        for y1 in 0..2 {
            let y = if under_exposure { y1 } else { y0 };
            let q = s.joint().get(y0, y1).value();
            out[y].0 += q;
            out[y].1 += q * pi[y0][y1].value();
        }
    }
    out
}

/// `Pr(A=1 | Y^a=1) = Pr(A=1 | Y^a=0)`; vacuous when either event is null.
fn independent_of_arm(masses: &[(Rational, Rational); 2]) -> bool {
    let [(m0, t0), (m1, t1)] = masses;
    if m0.is_zero() || m1.is_zero() {
        return true;
    }
    // t0/m0 == t1/m1 without dividing
    t0 * m1 == t1 * m0
}

pub fn check_conditional_exchangeability(
    p: &CounterfactualPopulation,
    m: &AssignmentMechanism,
) -> Result<Exchangeability> {
    let mut flags = Exchangeability { a0: true, a1: true };
    for s in p.strata() {
        let pi = m.stratum_cells(s.label())?;
        flags.a0 &= independent_of_arm(&arm_masses(s, &pi, false));
        flags.a1 &= independent_of_arm(&arm_masses(s, &pi, true));
    }
    Ok(flags)
}

pub fn check_marginal_exchangeability(
    p: &CounterfactualPopulation,
    m: &AssignmentMechanism,
) -> Result<Exchangeability> {
    let zero = || [(Rational::zero(), Rational::zero()), (Rational::zero(), Rational::zero())];
    let (mut untreated, mut treated) = (zero(), zero());
    for s in p.strata() {
        let pi = m.stratum_cells(s.label())?;
        let w = s.prevalence().value();
        for (acc, masses) in [
            (&mut untreated, arm_masses(s, &pi, false)),
            (&mut treated, arm_masses(s, &pi, true)),
        ] {
            for (a, (mass, t)) in acc.iter_mut().zip(masses) {
                a.0 += w * mass;
                a.1 += w * t;
            }
        }
    }
    Ok(Exchangeability {
        a0: independent_of_arm(&untreated),
        a1: independent_of_arm(&treated),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn prob(n: i64, d: i64) -> Probability {
        Probability::new(ratio(n, d)).unwrap()
    }

    fn stratum(label: &str, p: (i64, i64), r0: (i64, i64), r1: (i64, i64)) -> CounterfactualStratum {
        CounterfactualStratum::independent(label, prob(p.0, p.1), prob(r0.0, r0.1), prob(r1.0, r1.1))
    }

    fn table1() -> CounterfactualPopulation {
        CounterfactualPopulation::new(vec![
            stratum("men", (1, 4), (1, 2), (3, 4)),
            stratum("women", (3, 4), (1, 4), (1, 2)),
        ])
        .unwrap()
    }

    fn p2() -> CounterfactualPopulation {
        CounterfactualPopulation::new(vec![
            stratum("s1", (1, 2), (1, 5), (2, 5)),
            stratum("s2", (1, 2), (2, 5), (2, 5)),
        ])
        .unwrap()
    }

    fn raw(label: &str, p: Rational, q: [i64; 4], d: i64) -> RawStratum {
        RawStratum {
            label: label.into(),
            prevalence: p,
            joint: [[ratio(q[0], d), ratio(q[1], d)], [ratio(q[2], d), ratio(q[3], d)]],
        }
    }

    #[test]
    fn validation_accepts_point_mass() {
        let (pop, warnings) = validate_population(vec![raw("x", ratio(1, 1), [1, 0, 0, 0], 1)]).unwrap();
        assert_eq!(pop.len(), 1);
        assert!(warnings.is_empty());
        assert_eq!(stratum_risks(&pop.strata()[0]), RiskPair::new(prob(0, 1), prob(0, 1)));
    }

    #[test]
    fn validation_errors() {
        let bad_sum = vec![raw("a", ratio(1, 2), [1, 0, 0, 0], 1), raw("b", ratio(3, 5), [1, 0, 0, 0], 1)];
        assert!(matches!(validate_population(bad_sum), Err(Error::PrevalenceSum(s)) if s == "11/10"));

        let bad_joint = vec![raw("a", ratio(1, 1), [1, 1, 0, 0], 4)];
        assert!(matches!(validate_population(bad_joint), Err(Error::JointSum { .. })));

        let dup = vec![raw("a", ratio(1, 2), [1, 0, 0, 0], 1), raw("a", ratio(1, 2), [1, 0, 0, 0], 1)];
        assert_eq!(validate_population(dup).unwrap_err(), Error::DuplicateLabel("a".into()));

        assert_eq!(validate_population(vec![]).unwrap_err(), Error::EmptyPopulation);

        let negative = vec![raw("a", ratio(1, 1), [2, -1, 0, 0], 1)];
        assert!(matches!(validate_population(negative), Err(Error::InvalidProbability(_))));
    }

    #[test]
    fn zero_prevalence_is_dropped_with_warning() {
        let (pop, warnings) = validate_population(vec![
            raw("a", ratio(1, 1), [1, 0, 0, 0], 1),
            raw("ghost", ratio(0, 1), [0, 0, 0, 1], 1),
        ])
        .unwrap();
        assert_eq!(pop.labels().collect::<Vec<_>>(), ["a"]);
        assert_eq!(warnings, [ValidationWarning::ZeroPrevalenceDropped("ghost".into())]);
    }

    #[test]
    fn table1_risks_and_odds_ratios() {
        let pop = table1();
        assert_eq!(pop.strata()[0].risks(), RiskPair::new(prob(1, 2), prob(3, 4)));
        assert_eq!(marginal_risks(&pop), RiskPair::new(prob(5, 16), prob(9, 16)));
        let ors: Vec<_> = stratum_effects(EffectMeasureKind::Or, &pop)
            .into_iter()
            .map(|e| e.value)
            .collect();
        assert_eq!(ors, vec![StratumValue::Defined(ratio(3, 1)); 2]);
        assert_eq!(marginal_effect(EffectMeasureKind::Or, &pop).unwrap(), ratio(99, 35));
    }

    #[test]
    fn p2_values() {
        let pop = p2();
        assert_eq!(marginal_risks(&pop), RiskPair::new(prob(3, 10), prob(2, 5)));
        let rds: Vec<_> = stratum_effects(EffectMeasureKind::Rd, &pop)
            .into_iter()
            .map(|e| e.value.defined().cloned().unwrap())
            .collect();
        assert_eq!(rds, vec![ratio(1, 5), ratio(0, 1)]);
        assert_eq!(marginal_effect(EffectMeasureKind::Rd, &pop).unwrap(), ratio(1, 10));
    }

    #[test]
    fn independent_coupling_preserves_margins() {
        let s = stratum("s", (1, 1), (1, 5), (2, 5));
        assert_eq!(s.risks(), RiskPair::new(prob(1, 5), prob(2, 5)));
    }

    #[test]
    fn effect_value_formulas() {
        let r = RiskPair::new(prob(1, 4), prob(1, 2));
        assert_eq!(effect_value(EffectMeasureKind::Rd, &r).unwrap(), ratio(1, 4));
        assert_eq!(effect_value(EffectMeasureKind::RrMinus, &r).unwrap(), ratio(2, 1));
        assert_eq!(effect_value(EffectMeasureKind::RrPlus, &r).unwrap(), ratio(2, 3));
        assert_eq!(effect_value(EffectMeasureKind::InvRrMinus, &r).unwrap(), ratio(1, 2));
        assert_eq!(effect_value(EffectMeasureKind::InvRrPlus, &r).unwrap(), ratio(3, 2));
        assert_eq!(effect_value(EffectMeasureKind::Or, &r).unwrap(), ratio(3, 1));
    }

    #[test]
    fn undefined_measures() {
        let zero_base = RiskPair::new(prob(0, 1), prob(1, 2));
        assert!(matches!(
            effect_value(EffectMeasureKind::RrMinus, &zero_base),
            Err(Error::UndefinedMeasure { kind: EffectMeasureKind::RrMinus, .. })
        ));
        assert!(effect_value(EffectMeasureKind::Or, &zero_base).is_err());
        let certain = RiskPair::new(prob(1, 1), prob(1, 1));
        assert!(effect_value(EffectMeasureKind::RrPlus, &certain).is_err());
        assert!(effect_value(EffectMeasureKind::InvRrPlus, &certain).is_err());
        assert!(effect_value(EffectMeasureKind::InvRrMinus, &RiskPair::new(prob(1, 2), prob(0, 1))).is_err());
        assert_eq!(effect_value(EffectMeasureKind::Rd, &certain).unwrap(), ratio(0, 1));
    }

    #[test]
    fn undefined_strata_are_markers() {
        let pop = CounterfactualPopulation::new(vec![
            stratum("a", (1, 2), (0, 1), (1, 2)),
            stratum("b", (1, 2), (1, 4), (1, 2)),
        ])
        .unwrap();
        let effects = stratum_effects(EffectMeasureKind::RrMinus, &pop);
        assert!(matches!(effects[0].value, StratumValue::Undefined(_)));
        assert_eq!(effects[1].value, StratumValue::Defined(ratio(2, 1)));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in EffectMeasureKind::ALL {
            assert_eq!(k.as_str().parse::<EffectMeasureKind>().unwrap(), k);
        }
        assert_eq!("RR_MINUS".parse::<EffectMeasureKind>().unwrap(), EffectMeasureKind::RrMinus);
        assert!("hazard".parse::<EffectMeasureKind>().is_err());
    }

    #[test]
    fn randomized_assignment_recovers_counterfactual_risks() {
        let pop = table1();
        let t = apply_assignment(&pop, &AssignmentMechanism::constant(prob(1, 2))).unwrap();
        for (obs, s) in t.strata().iter().zip(pop.strata()) {
            assert_eq!(obs.p_exposed, prob(1, 2));
            assert_eq!(obs.risks().unwrap(), s.risks());
        }
    }

    #[test]
    fn everyone_exposed_leaves_r0_absent() {
        let t = apply_assignment(&p2(), &AssignmentMechanism::constant(Probability::one())).unwrap();
        assert!(t.strata().iter().all(|s| s.r0.is_none() && s.r1.is_some()));
        assert!(matches!(t.marginal_risks(), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn mechanism_must_cover_population() {
        let mut m = AssignmentMechanism::empty();
        m.set_stratum("s1", prob(1, 2));
        assert_eq!(
            apply_assignment(&p2(), &m).unwrap_err(),
            Error::MechanismUndefined("s2".into())
        );
        assert!(check_conditional_exchangeability(&p2(), &m).is_err());
    }

    #[test]
    fn exchangeability_flags() {
        let pop = p2();
        let random = AssignmentMechanism::constant(prob(1, 2));
        assert_eq!(
            check_conditional_exchangeability(&pop, &random).unwrap(),
            Exchangeability { a0: true, a1: true }
        );

        let mut confounded = AssignmentMechanism::empty();
        for label in ["s1", "s2"] {
            confounded.set_by_untreated_outcome(label, prob(1, 10), prob(9, 10));
        }
        let flags = check_conditional_exchangeability(&pop, &confounded).unwrap();
        assert!(!flags.a0);
        // Independent coupling: A depends on Y^{a=0} only, so Y^{a=1} stays independent.
        assert!(flags.a1);
        assert!(!check_marginal_exchangeability(&pop, &confounded).unwrap().a0);
    }

    #[test]
    fn stratum_specific_randomization_breaks_only_marginal_exchangeability() {
        let pop = CounterfactualPopulation::new(vec![
            stratum("s1", (1, 2), (1, 5), (2, 5)),
            stratum("s2", (1, 2), (3, 5), (4, 5)),
        ])
        .unwrap();
        let mut m = AssignmentMechanism::empty();
        m.set_stratum("s1", prob(1, 5)).set_stratum("s2", prob(4, 5));
        assert!(check_conditional_exchangeability(&pop, &m).unwrap().both());
        let marginal = check_marginal_exchangeability(&pop, &m).unwrap();
        assert!(!marginal.a0 && !marginal.a1);
    }

    #[test]
    fn recoupling_keeps_margins_and_rejects_infeasible_mass() {
        let s = stratum("s", (1, 1), (1, 5), (2, 5));
        let (lo, hi) = s.coupling_bounds();
        assert_eq!((lo.clone(), hi.clone()), (ratio(0, 1), ratio(1, 5)));
        for both in [lo, hi, ratio(1, 10)] {
            assert_eq!(s.recoupled(both).unwrap().risks(), s.risks());
        }
        assert!(s.recoupled(ratio(1, 4)).is_err());
    }

    #[test]
    fn table_validation() {
        let row = |label: &str, pa: Probability, r0: Option<Probability>, r1: Option<Probability>| ObservedStratum {
            label: label.into(),
            prevalence: prob(1, 2),
            p_exposed: pa,
            r0,
            r1,
        };
        let ok = ObservationalTable::new(vec![
            row("a", prob(1, 2), Some(prob(1, 5)), Some(prob(2, 5))),
            row("b", prob(1, 1), None, Some(prob(2, 5))),
        ]);
        assert!(ok.is_ok());
        let inconsistent = ObservationalTable::new(vec![
            row("a", prob(1, 1), Some(prob(1, 5)), Some(prob(2, 5))),
            row("b", prob(1, 2), Some(prob(1, 5)), Some(prob(2, 5))),
        ]);
        assert!(matches!(inconsistent, Err(Error::InconsistentCell { .. })));
    }
}
