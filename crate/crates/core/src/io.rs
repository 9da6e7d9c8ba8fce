//! JSON and CSV forms of populations, mechanisms, tables and reports.
//!
//! Probabilities and every other exact quantity travel as strings (`"3/4"`
//! or an exact decimal such as `"0.75"`), never as JSON numbers, so that
//! `parse(emit(x)) == x` holds exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::collapse::{
    CollapsibilityReport, Definition, EquivalenceReport, FeasibilityResult, NamedCondition,
    NewmanWeights, ValueComparison, Verdict, WeightVector,
};
use crate::error::{Error, Result};
use crate::identify::TargetStratum;
use crate::model::{
    validate_population, AssignmentMechanism, CounterfactualPopulation, EffectMeasureKind,
    Exchangeability, Joint, ObservationalTable, ObservedStratum, RawStratum, StratumEffect,
    StratumValue, ValidationWarning,
};
use crate::rational::{format_rational, parse_rational, serde_rational, Probability, Rational};
use crate::scenario::ScenarioSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointDoc {
    pub q00: String,
    pub q01: String,
    pub q10: String,
    pub q11: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDoc {
    pub label: String,
    pub prevalence: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointDoc>,
    /// Shorthand for the independent coupling of the two risks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk1: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationDoc {
    pub strata: Vec<StratumDoc>,
}

impl From<&CounterfactualPopulation> for PopulationDoc {
    fn from(p: &CounterfactualPopulation) -> Self {
        let strata = p
            .strata()
            .iter()
            .map(|s| {
                let q = |y0, y1| s.joint().get(y0, y1).to_string();
                StratumDoc {
                    label: s.label().to_string(),
                    prevalence: s.prevalence().to_string(),
                    joint: Some(JointDoc {
                        q00: q(0, 0),
                        q01: q(0, 1),
                        q10: q(1, 0),
                        q11: q(1, 1),
                    }),
                    risk0: None,
                    risk1: None,
                }
            })
            .collect();
        PopulationDoc { strata }
    }
}

impl PopulationDoc {
    pub fn into_population(self) -> Result<(CounterfactualPopulation, Vec<ValidationWarning>)> {
        let raw = self
            .strata
            .into_iter()
            .map(|s| {
                let prevalence = parse_rational(&s.prevalence)?;
                let joint = match (s.joint, s.risk0, s.risk1) {
                    (Some(j), None, None) => [
                        [parse_rational(&j.q00)?, parse_rational(&j.q01)?],
                        [parse_rational(&j.q10)?, parse_rational(&j.q11)?],
                    ],
                    (None, Some(r0), Some(r1)) => {
                        let j = Joint::independent(&Probability::parse(&r0)?, &Probability::parse(&r1)?);
                        let q = |y0, y1| j.get(y0, y1).value().clone();
                        [[q(0, 0), q(0, 1)], [q(1, 0), q(1, 1)]]
                    }
                    _ => {
                        return Err(Error::Parse(format!(
                            "stratum {:?} needs either \"joint\" or both \"risk0\" and \"risk1\"",
                            s.label
                        )))
                    }
                };
                Ok(RawStratum {
                    label: s.label,
                    prevalence,
                    joint,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        validate_population(raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiDoc {
    pub label: String,
    /// Omitted: applies to both values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y1: Option<u8>,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    #[serde(default)]
    pub pi: Vec<PiDoc>,
}

impl From<&AssignmentMechanism> for MechanismDoc {
    fn from(m: &AssignmentMechanism) -> Self {
        MechanismDoc {
            constant: m.default_probability().map(|p| p.to_string()),
            pi: m
                .explicit_cells()
                .map(|(label, y0, y1, p)| PiDoc {
                    label: label.to_string(),
                    y0: Some(y0 as u8),
                    y1: Some(y1 as u8),
                    p: p.to_string(),
                })
                .collect(),
        }
    }
}

impl MechanismDoc {
    pub fn into_mechanism(self) -> Result<AssignmentMechanism> {
        let mut m = match self.constant {
            Some(c) => AssignmentMechanism::constant(Probability::parse(&c)?),
            None => AssignmentMechanism::empty(),
        };
        let values = |y: Option<u8>| -> Result<Vec<usize>> {
            match y {
                None => Ok(vec![0, 1]),
                Some(v @ (0 | 1)) => Ok(vec![v as usize]),
                Some(v) => Err(Error::Parse(format!("potential outcome must be 0 or 1, got {v}"))),
            }
        };
        for cell in self.pi {
            let p = Probability::parse(&cell.p)?;
            for y0 in values(cell.y0)? {
                for y1 in values(cell.y1)? {
                    m.set(&cell.label, y0, y1, p.clone());
                }
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowDoc {
    pub label: String,
    pub prevalence: String,
    #[serde(rename = "pA")]
    pub p_exposed: String,
    #[serde(default)]
    pub r0: Option<String>,
    #[serde(default)]
    pub r1: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub strata: Vec<TableRowDoc>,
}

impl From<&ObservationalTable> for TableDoc {
    fn from(t: &ObservationalTable) -> Self {
        TableDoc {
            strata: t
                .strata()
                .iter()
                .map(|s| TableRowDoc {
                    label: s.label.clone(),
                    prevalence: s.prevalence.to_string(),
                    p_exposed: s.p_exposed.to_string(),
                    r0: s.r0.as_ref().map(Probability::to_string),
                    r1: s.r1.as_ref().map(Probability::to_string),
                })
                .collect(),
        }
    }
}

fn optional_probability(text: Option<String>) -> Result<Option<Probability>> {
    text.filter(|t| !t.trim().is_empty())
        .map(|t| Probability::parse(&t))
        .transpose()
}

impl TableDoc {
    pub fn into_table(self) -> Result<(ObservationalTable, Vec<ValidationWarning>)> {
        let strata = self
            .strata
            .into_iter()
            .map(|r| {
                Ok(ObservedStratum {
                    prevalence: Probability::parse(&r.prevalence)?,
                    p_exposed: Probability::parse(&r.p_exposed)?,
                    r0: optional_probability(r.r0)?,
                    r1: optional_probability(r.r1)?,
                    label: r.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ObservationalTable::validate(strata)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRowDoc {
    pub label: String,
    pub prevalence: String,
    pub risk: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetDoc {
    pub strata: Vec<TargetRowDoc>,
}

impl TargetDoc {
    pub fn into_strata(self) -> Result<Vec<TargetStratum>> {
        self.strata
            .into_iter()
            .map(|r| {
                Ok(TargetStratum {
                    prevalence: Probability::parse(&r.prevalence)?,
                    risk: Probability::parse(&r.risk)?,
                    label: r.label,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub population: PopulationDoc,
    pub mechanism: MechanismDoc,
}

impl From<&ScenarioSpec> for ScenarioDoc {
    fn from(s: &ScenarioSpec) -> Self {
        ScenarioDoc {
            name: s.name.clone(),
            description: s.description.clone(),
            population: (&s.population).into(),
            mechanism: (&s.mechanism).into(),
        }
    }
}

impl ScenarioDoc {
    pub fn into_scenario(self) -> Result<(ScenarioSpec, Vec<ValidationWarning>)> {
        let (population, warnings) = self.population.into_population()?;
        let mechanism = self.mechanism.into_mechanism()?;
        mechanism.covers(&population)?;
        Ok((
            ScenarioSpec {
                name: self.name,
                description: self.description,
                population,
                mechanism,
            },
            warnings,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDoc {
    pub label: String,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
}

pub fn weights_doc(w: &WeightVector) -> Vec<WeightDoc> {
    w.entries()
        .iter()
        .map(|(label, weight)| WeightDoc {
            label: label.clone(),
            weight: weight.clone(),
        })
        .collect()
}

pub fn weights_from_doc(doc: Vec<WeightDoc>) -> Result<WeightVector> {
    WeightVector::new(doc.into_iter().map(|d| (d.label, d.weight)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumValueDoc {
    pub label: String,
    /// `null` when undefined.
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undefined: Option<String>,
}

impl From<&StratumEffect> for StratumValueDoc {
    fn from(e: &StratumEffect) -> Self {
        match &e.value {
            StratumValue::Defined(v) => StratumValueDoc {
                label: e.label.clone(),
                value: Some(format_rational(v)),
                undefined: None,
            },
            StratumValue::Undefined(reason) => StratumValueDoc {
                label: e.label.clone(),
                value: None,
                undefined: Some(reason.clone()),
            },
        }
    }
}

impl StratumValueDoc {
    pub fn into_effect(self) -> Result<StratumEffect> {
        let value = match self.value {
            Some(v) => StratumValue::Defined(parse_rational(&v)?),
            None => StratumValue::Undefined(self.undefined.unwrap_or_default()),
        };
        Ok(StratumEffect {
            label: self.label,
            value,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub definition: Definition,
    pub kind: EffectMeasureKind,
    pub stratum_values: Vec<StratumValueDoc>,
    #[serde(with = "serde_rational")]
    pub marginal_value: Rational,
    pub weights: Vec<WeightDoc>,
    #[serde(with = "serde_rational")]
    pub weighted_average: Rational,
    #[serde(with = "serde_rational")]
    pub residual: Rational,
    pub collapsible: bool,
}

impl From<&CollapsibilityReport> for ReportDoc {
    fn from(r: &CollapsibilityReport) -> Self {
        ReportDoc {
            definition: r.definition,
            kind: r.kind,
            stratum_values: r.stratum_values.iter().map(Into::into).collect(),
            marginal_value: r.marginal_value.clone(),
            weights: weights_doc(&r.weights),
            weighted_average: r.weighted_average.clone(),
            residual: r.residual.clone(),
            collapsible: r.collapsible,
        }
    }
}

impl ReportDoc {
    pub fn into_report(self) -> Result<CollapsibilityReport> {
        Ok(CollapsibilityReport {
            definition: self.definition,
            kind: self.kind,
            stratum_values: self
                .stratum_values
                .into_iter()
                .map(StratumValueDoc::into_effect)
                .collect::<Result<_>>()?,
            marginal_value: self.marginal_value,
            weights: weights_from_doc(self.weights)?,
            weighted_average: self.weighted_average,
            residual: self.residual,
            collapsible: self.collapsible,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceDoc {
    #[serde(with = "serde_rational")]
    pub min: Rational,
    #[serde(with = "serde_rational")]
    pub max: Rational,
    #[serde(with = "serde_rational")]
    pub marginal: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityDoc {
    pub verdict: Verdict,
    pub witness: Option<Vec<WeightDoc>>,
    pub evidence: EvidenceDoc,
    #[serde(default)]
    pub excluded: Vec<String>,
}

impl From<&FeasibilityResult> for FeasibilityDoc {
    fn from(f: &FeasibilityResult) -> Self {
        FeasibilityDoc {
            verdict: f.verdict,
            witness: f.witness.as_ref().map(weights_doc),
            evidence: EvidenceDoc {
                min: f.min.clone(),
                max: f.max.clone(),
                marginal: f.marginal.clone(),
            },
            excluded: f.excluded.clone(),
        }
    }
}

impl FeasibilityDoc {
    pub fn into_result(self) -> Result<FeasibilityResult> {
        Ok(FeasibilityResult {
            verdict: self.verdict,
            witness: self.witness.map(weights_from_doc).transpose()?,
            min: self.evidence.min,
            max: self.evidence.max,
            marginal: self.evidence.marginal,
            excluded: self.excluded,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewmanDoc {
    pub weights: Vec<WeightDoc>,
    pub conditions: Vec<NamedCondition>,
}

impl From<&NewmanWeights> for NewmanDoc {
    fn from(n: &NewmanWeights) -> Self {
        NewmanDoc {
            weights: weights_doc(&n.weights),
            conditions: n.conditions.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonDoc {
    pub label: String,
    pub causal: Option<String>,
    pub associational: Option<String>,
    pub equal: bool,
    pub gap: Option<String>,
}

impl From<&ValueComparison> for ComparisonDoc {
    fn from(c: &ValueComparison) -> Self {
        ComparisonDoc {
            label: c.label.clone(),
            causal: c.causal.defined().map(format_rational),
            associational: c.associational.defined().map(format_rational),
            equal: c.equal(),
            gap: c.gap().as_ref().map(format_rational),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindComparisonDoc {
    pub kind: EffectMeasureKind,
    pub agrees: bool,
    pub strata: Vec<ComparisonDoc>,
    pub marginal: ComparisonDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceDoc {
    pub conditional_exchangeability: Exchangeability,
    pub marginal_exchangeability: Exchangeability,
    pub all_agree: bool,
    pub kinds: Vec<KindComparisonDoc>,
}

impl From<&EquivalenceReport> for EquivalenceDoc {
    fn from(r: &EquivalenceReport) -> Self {
        EquivalenceDoc {
            conditional_exchangeability: r.conditional,
            marginal_exchangeability: r.marginal,
            all_agree: r.all_agree(),
            kinds: r
                .kinds
                .iter()
                .map(|k| KindComparisonDoc {
                    kind: k.kind,
                    agrees: k.agrees(),
                    strata: k.strata.iter().map(Into::into).collect(),
                    marginal: (&k.marginal).into(),
                })
                .collect(),
        }
    }
}

/// Any of the documents accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputDocument {
    Scenario(ScenarioSpec),
    Population(CounterfactualPopulation),
    Table(ObservationalTable),
    Target(Vec<TargetStratum>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub document: InputDocument,
    pub warnings: Vec<ValidationWarning>,
}

fn first_row_has(value: &Value, key: &str) -> bool {
    value["strata"]
        .as_array()
        .and_then(|rows| rows.first())
        .is_some_and(|row| row.get(key).is_some())
}

/// Detects the document type from its shape: a `population` key means a
/// scenario, rows with `pA` a table, rows with `risk` an unexposed target,
/// anything else a counterfactual population.
pub fn parse_json_input(text: &str) -> Result<Parsed> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("population").is_some() {
        let (s, warnings) = serde_json::from_value::<ScenarioDoc>(value)?.into_scenario()?;
        return Ok(Parsed {
            document: InputDocument::Scenario(s),
            warnings,
        });
    }
    if first_row_has(&value, "pA") {
        let (t, warnings) = serde_json::from_value::<TableDoc>(value)?.into_table()?;
        return Ok(Parsed {
            document: InputDocument::Table(t),
            warnings,
        });
    }
    if first_row_has(&value, "risk") {
        let strata = serde_json::from_value::<TargetDoc>(value)?.into_strata()?;
        return Ok(Parsed {
            document: InputDocument::Target(strata),
            warnings: vec![],
        });
    }
    let (p, warnings) = serde_json::from_value::<PopulationDoc>(value)?.into_population()?;
    Ok(Parsed {
        document: InputDocument::Population(p),
        warnings,
    })
}

/// One row per stratum. Header `label,prevalence,risk0,risk1` is a
/// counterfactual population (independent coupling), `label,prevalence,pA,r0,r1`
/// an observational table (empty cells are absent), `label,prevalence,risk`
/// an unexposed target.
pub fn parse_csv_input(text: &str) -> Result<Parsed> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let header = headers.iter().map(String::as_str).collect::<Vec<_>>();
    match header.as_slice() {
        ["label", "prevalence", "risk0", "risk1"] => {
            let strata = reader
                .deserialize::<(String, String, String, String)>()
                .map(|row| {
                    let (label, prevalence, risk0, risk1) = row?;
                    Ok(StratumDoc {
                        label,
                        prevalence,
                        joint: None,
                        risk0: Some(risk0),
                        risk1: Some(risk1),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (p, warnings) = PopulationDoc { strata }.into_population()?;
            Ok(Parsed {
                document: InputDocument::Population(p),
                warnings,
            })
        }
        ["label", "prevalence", "pA", "r0", "r1"] => {
            let strata = reader
                .deserialize::<(String, String, String, String, String)>()
                .map(|row| {
                    let (label, prevalence, p_exposed, r0, r1) = row?;
                    Ok(TableRowDoc {
                        label,
                        prevalence,
                        p_exposed,
                        r0: Some(r0),
                        r1: Some(r1),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (t, warnings) = TableDoc { strata }.into_table()?;
            Ok(Parsed {
                document: InputDocument::Table(t),
                warnings,
            })
        }
        ["label", "prevalence", "risk"] => {
            let strata = reader
                .deserialize::<TargetRowDoc>()
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(Parsed {
                document: InputDocument::Target(TargetDoc { strata }.into_strata()?),
                warnings: vec![],
            })
        }
        _ => Err(Error::Parse(format!("unrecognized CSV header: {}", headers.join(",")))),
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::{check_causal_collapsibility, weight_feasibility};
    use crate::model::{apply_assignment, stratum_effects};
    use crate::rational::ratio;
    use crate::scenario::builtin_scenario;

    #[test]
    fn population_shorthand_expands_to_independent_coupling() {
        let text = r#"{"strata":[
            {"label":"men","prevalence":"0.25","risk0":"0.5","risk1":"0.75"},
            {"label":"women","prevalence":"3/4","risk0":"1/4","risk1":"0.5"}]}"#;
        let parsed = parse_json_input(text).unwrap();
        let table1 = builtin_scenario("table1").unwrap().population;
        assert_eq!(parsed.document, InputDocument::Population(table1));
    }

    #[test]
    fn population_json_round_trip() {
        let p = builtin_scenario("table1").unwrap().population;
        let text = to_json(&PopulationDoc::from(&p));
        assert!(text.contains("\"q11\": \"3/8\""));
        let back: PopulationDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_population().unwrap().0, p);
    }

    #[test]
    fn json_numbers_are_rejected() {
        let text = r#"{"strata":[{"label":"a","prevalence":1,"risk0":"0","risk1":"0"}]}"#;
        assert!(parse_json_input(text).is_err());
    }

    #[test]
    fn mechanism_shorthand_and_round_trip() {
        let doc: MechanismDoc =
            serde_json::from_str(r#"{"pi":[{"label":"s1","y0":1,"p":"0.9"},{"label":"s1","y0":0,"p":"1/10"}]}"#)
                .unwrap();
        let m = doc.into_mechanism().unwrap();
        assert_eq!(m.pi("s1", 1, 0).unwrap().value(), &ratio(9, 10));
        assert_eq!(m.pi("s1", 0, 1).unwrap().value(), &ratio(1, 10));
        assert!(m.pi("s2", 0, 0).is_none());
        let back = MechanismDoc::from(&m).into_mechanism().unwrap();
        assert_eq!(back, m);

        let c: MechanismDoc = serde_json::from_str(r#"{"constant":"1/2"}"#).unwrap();
        assert_eq!(c.into_mechanism().unwrap().pi("any", 1, 1).unwrap().value(), &ratio(1, 2));

        let bad: MechanismDoc = serde_json::from_str(r#"{"pi":[{"label":"s","y0":2,"p":"0"}]}"#).unwrap();
        assert!(bad.into_mechanism().is_err());
    }

    #[test]
    fn table_null_cells() {
        let s = builtin_scenario("table1").unwrap();
        let everyone = AssignmentMechanism::constant(Probability::one());
        let t = apply_assignment(&s.population, &everyone).unwrap();
        let text = to_json(&TableDoc::from(&t));
        assert!(text.contains("\"r0\": null"));
        match parse_json_input(&text).unwrap().document {
            InputDocument::Table(back) => assert_eq!(back, t),
            other => panic!("parsed as {other:?}"),
        }
    }

    #[test]
    fn scenario_round_trip() {
        for name in crate::scenario::SCENARIO_NAMES {
            let s = builtin_scenario(name).unwrap();
            let text = to_json(&ScenarioDoc::from(&s));
            match parse_json_input(&text).unwrap().document {
                InputDocument::Scenario(back) => assert_eq!(back, s),
                other => panic!("parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn report_and_feasibility_round_trip() {
        let s = builtin_scenario("table1").unwrap();
        let w = crate::collapse::prevalence_weights(&s.population);
        let r = check_causal_collapsibility(EffectMeasureKind::Or, &s.population, Some(&w)).unwrap();
        let text = to_json(&ReportDoc::from(&r));
        assert!(text.contains("\"marginal_value\": \"99/35\""));
        let back: ReportDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_report().unwrap(), r);

        let f = weight_feasibility(&stratum_effects(EffectMeasureKind::Or, &s.population), &r.marginal_value)
            .unwrap();
        let back: FeasibilityDoc = serde_json::from_str(&to_json(&FeasibilityDoc::from(&f))).unwrap();
        assert_eq!(back.into_result().unwrap(), f);
    }

    #[test]
    fn csv_population_and_table() {
        let csv = "label,prevalence,risk0,risk1\nmen,0.25,0.5,0.75\nwomen,0.75,0.25,0.5\n";
        let parsed = parse_csv_input(csv).unwrap();
        assert_eq!(
            parsed.document,
            InputDocument::Population(builtin_scenario("table1").unwrap().population)
        );

        let csv = "label,prevalence,pA,r0,r1\na,0.5,1,,0.2\nb,0.5,0.5,0.1,0.3\n";
        match parse_csv_input(csv).unwrap().document {
            InputDocument::Table(t) => {
                assert!(t.strata()[0].r0.is_none());
                assert_eq!(t.strata()[1].r1.as_ref().unwrap().value(), &ratio(3, 10));
            }
            other => panic!("parsed as {other:?}"),
        }

        let csv = "label,prevalence,risk\na,0.5,0.2\nb,0.5,0.4\n";
        assert!(matches!(parse_csv_input(csv).unwrap().document, InputDocument::Target(_)));
        assert!(parse_csv_input("a,b\n1,2\n").is_err());
    }

    #[test]
    fn csv_zero_prevalence_warning() {
        let csv = "label,prevalence,risk0,risk1\na,1,0.5,0.75\nb,0,0.25,0.5\n";
        let parsed = parse_csv_input(csv).unwrap();
        assert_eq!(parsed.warnings, [ValidationWarning::ZeroPrevalenceDropped("b".into())]);
    }
}
