use std::borrow::Cow;
use std::io::Read;

use collapsekit_core::generate::{random_mechanism, random_population_where, RNG_ALGORITHM};
use collapsekit_core::io::{
    parse_csv_input, parse_json_input, weights_doc, FeasibilityDoc, InputDocument, MechanismDoc,
    NewmanDoc, PopulationDoc, ReportDoc, ScenarioDoc,
};
use collapsekit_core::rational::{format_rational, parse_rational};
use collapsekit_core::{
    apply_assignment, builtin_scenario, causal_weights, check_associational_collapsibility,
    check_causal_collapsibility, check_conditional_exchangeability, check_marginal_exchangeability,
    identify_rr_minus_weights, marginal_effect, miettinen_weights, newman_weights,
    prevalence_weights, standardized_effect, stratum_effects, unexposed_target_weights,
    weight_feasibility, CollapsibilityReport, CounterfactualPopulation, EffectMeasureKind, Error,
    FeasibilityResult, GeneratorConfig, ObservationalTable, RiskPair, StratumEffect, WeightVector,
};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{both, decimal, effect_json, effect_text, value_json, weights_text, Rendered};
use crate::{Cli, Command, DefinitionArg, InputArg, Scheme};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_undefinedness() => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<String> {
    let places = cli.decimals;
    let rendered = match &cli.command {
        Command::Measures(input) => measures(&read_input(input)?, places)?,
        Command::Weights {
            scheme,
            kind,
            input,
        } => weights(*scheme, *kind, &read_input(input)?, places)?,
        Command::CollapseCheck {
            kind,
            definition,
            weights,
            input,
        } => collapse_check(kind.kind, *definition, weights.as_deref(), &read_input(input)?, places)?,
        Command::Feasibility { kind, input } => feasibility(kind.kind, &read_input(input)?, places)?,
        Command::Standardize { kind, input } => standardize(kind.kind, &read_input(input)?, places)?,
        Command::Scenario { name } => scenario(name)?,
        Command::Simulate {
            strata,
            denominator_bound,
            kind,
            confounded,
            count,
        } => {
            let cfg = GeneratorConfig {
                stratum_count: *strata,
                denominator_bound: *denominator_bound,
                confounded: *confounded,
                seed: cli.seed,
            };
            simulate(&cfg, *kind, *count, places)?
        }
        Command::Validate(input) => validate(&read_input(input)?),
    };
    Ok(rendered.into_string(cli.format))
}

fn read_input(arg: &InputArg) -> CliResult<InputDocument> {
    let text = match arg.input.as_deref() {
        None => read_stdin()?,
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?,
    };
    let parsed = if text.trim_start().starts_with('{') {
        parse_json_input(&text)?
    } else {
        parse_csv_input(&text)?
    };
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.document)
}

fn read_stdin() -> CliResult<String> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
    Ok(text)
}

fn population_of(doc: &InputDocument) -> CliResult<&CounterfactualPopulation> {
    match doc {
        InputDocument::Scenario(s) => Ok(&s.population),
        InputDocument::Population(p) => Ok(p),
        _ => Err(CliError::Input(
            "this command needs a counterfactual population or scenario".into(),
        )),
    }
}

/// Observed table, generating it from a scenario's mechanism if needed.
fn table_of(doc: &InputDocument) -> CliResult<Cow<'_, ObservationalTable>> {
    match doc {
        InputDocument::Table(t) => Ok(Cow::Borrowed(t)),
        InputDocument::Scenario(s) => Ok(Cow::Owned(apply_assignment(&s.population, &s.mechanism)?)),
        InputDocument::Population(_) => Err(CliError::Input(
            "an observational table is needed; pass a table or a scenario with a mechanism".into(),
        )),
        InputDocument::Target(_) => Err(CliError::Input("an observational table is needed".into())),
    }
}

fn parse_weights<'a>(text: &str, labels: impl Iterator<Item = &'a str>) -> CliResult<WeightVector> {
    let values = text
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightVector::from_parts(labels, values)?)
}

fn weights_json(w: &WeightVector, places: usize) -> Value {
    Value::Array(
        w.entries()
            .iter()
            .map(|(l, x)| json!({ "label": l, "weight": format_rational(x), "decimal": decimal(x, places) }))
            .collect(),
    )
}

fn measure_section(
    definition: &str,
    per_kind: impl Fn(EffectMeasureKind) -> (Vec<StratumEffect>, Result<collapsekit_core::Rational, Error>),
    places: usize,
) -> (Value, String) {
    let mut kinds = Vec::new();
    let mut text = format!("{definition} measures\n");
    for kind in EffectMeasureKind::ALL {
        let (strata, marginal) = per_kind(kind);
        let marginal_json = match &marginal {
            Ok(v) => value_json(v, places),
            Err(e) => json!({ "value": null, "undefined": e.to_string() }),
        };
        let marginal_text = match &marginal {
            Ok(v) => both(v, places),
            Err(e) => format!("undefined ({e})"),
        };
        text.push_str(&format!("  {kind}\n"));
        for e in &strata {
            text.push_str(&format!("    {}\n", effect_text(e, places)));
        }
        text.push_str(&format!("    marginal: {marginal_text}\n"));
        kinds.push(json!({
            "kind": kind,
            "strata": strata.iter().map(|e| effect_json(e, places)).collect::<Vec<_>>(),
            "marginal": marginal_json,
        }));
    }
    (json!({ "definition": definition, "measures": kinds }), text)
}

fn measures(doc: &InputDocument, places: usize) -> CliResult<Rendered> {
    let mut sections = Vec::new();
    let mut text = String::new();
    if let InputDocument::Scenario(_) | InputDocument::Population(_) = doc {
        let p = population_of(doc)?;
        let (j, t) = measure_section("causal", |k| (stratum_effects(k, p), marginal_effect(k, p)), places);
        sections.push(j);
        text.push_str(&t);
    }
    if let InputDocument::Scenario(_) | InputDocument::Table(_) = doc {
        let t = table_of(doc)?;
        let (j, s) = measure_section("associational", |k| (t.stratum_effects(k), t.marginal_effect(k)), places);
        sections.push(j);
        text.push_str(&s);
    }
    if sections.is_empty() {
        return Err(CliError::Input("measures needs a population, table or scenario".into()));
    }
    Ok(Rendered {
        json: json!({ "sections": sections }),
        text,
    })
}

fn require_kind(kind: Option<EffectMeasureKind>, scheme: &str) -> CliResult<EffectMeasureKind> {
    kind.ok_or_else(|| CliError::Input(format!("--kind is required for the {scheme} scheme")))
}

fn weights(
    scheme: Scheme,
    kind: Option<EffectMeasureKind>,
    doc: &InputDocument,
    places: usize,
) -> CliResult<Rendered> {
    let (name, kind, w, conditions) = match scheme {
        Scheme::Causal => {
            let kind = require_kind(kind, "causal")?;
            ("causal", Some(kind), causal_weights(kind, population_of(doc)?)?, None)
        }
        Scheme::Newman => {
            let kind = require_kind(kind, "newman")?;
            let n = newman_weights(kind, &*table_of(doc)?)?;
            let doc = NewmanDoc::from(&n);
            ("newman", Some(kind), n.weights, Some(doc.conditions))
        }
        Scheme::Identify => ("identify", None, identify_rr_minus_weights(&*table_of(doc)?)?, None),
        Scheme::Miettinen => ("miettinen", None, miettinen_weights(&*table_of(doc)?)?, None),
        Scheme::UnexposedTarget => match doc {
            InputDocument::Target(strata) => ("unexposed-target", None, unexposed_target_weights(strata)?, None),
            _ => {
                return Err(CliError::Input(
                    "unexposed-target needs rows of label, prevalence, risk".into(),
                ))
            }
        },
    };
    let mut text = match kind {
        Some(k) => format!("{name} weights for {k}\n"),
        None => format!("{name} weights\n"),
    };
    text.push_str(&weights_text(w.entries(), places));
    let mut json = json!({ "scheme": name, "kind": kind, "weights": weights_json(&w, places) });
    if let Some(conditions) = conditions {
        for c in &conditions {
            text.push_str(&format!("  condition {}: {}\n", c.name, c.holds));
        }
        json["conditions"] = serde_json::to_value(conditions).expect("conditions serialize");
    }
    Ok(Rendered { json, text })
}

fn feasibility_json(f: &FeasibilityResult, places: usize) -> Value {
    let mut v = serde_json::to_value(FeasibilityDoc::from(f)).expect("feasibility serializes");
    v["display"] = json!({
        "min": decimal(&f.min, places),
        "max": decimal(&f.max, places),
        "marginal": decimal(&f.marginal, places),
    });
    v
}

fn feasibility_text(f: &FeasibilityResult, places: usize) -> String {
    let mut text = format!(
        "verdict: {:?}\nstratum range: [{}, {}]\nmarginal: {}\n",
        f.verdict,
        both(&f.min, places),
        both(&f.max, places),
        both(&f.marginal, places)
    );
    if let Some(w) = &f.witness {
        text.push_str("witness:\n");
        text.push_str(&weights_text(w.entries(), places));
    }
    if !f.excluded.is_empty() {
        text.push_str(&format!("excluded (undefined): {}\n", f.excluded.join(", ")));
    }
    text
}

fn report_json(r: &CollapsibilityReport, source: &str, places: usize) -> Value {
    let mut v = serde_json::to_value(ReportDoc::from(r)).expect("report serializes");
    v["weights_source"] = json!(source);
    v["display"] = json!({
        "marginal_value": decimal(&r.marginal_value, places),
        "weighted_average": decimal(&r.weighted_average, places),
        "residual": decimal(&r.residual, places),
    });
    v
}

fn report_text(r: &CollapsibilityReport, source: &str, places: usize) -> String {
    let mut text = format!("{:?} collapsibility of {}\n", r.definition, r.kind);
    for e in &r.stratum_values {
        text.push_str(&format!("  {}\n", effect_text(e, places)));
    }
    text.push_str(&format!("weights ({source}):\n"));
    text.push_str(&weights_text(r.weights.entries(), places));
    text.push_str(&format!(
        "weighted average: {}\nmarginal: {}\nresidual: {}\ncollapsible: {}\n",
        both(&r.weighted_average, places),
        both(&r.marginal_value, places),
        both(&r.residual, places),
        r.collapsible
    ));
    text
}

/// Causal report with the measure's own weights; the odds ratio has none and
/// falls back to prevalence weights plus a weight-existence check.
fn causal_report(
    kind: EffectMeasureKind,
    p: &CounterfactualPopulation,
) -> CliResult<(CollapsibilityReport, &'static str, Option<FeasibilityResult>)> {
    match check_causal_collapsibility(kind, p, None) {
        Ok(r) => Ok((r, "canonical", None)),
        Err(Error::NoGeneralWeights(_)) => {
            let r = check_causal_collapsibility(kind, p, Some(&prevalence_weights(p)))?;
            let f = weight_feasibility(&r.stratum_values, &r.marginal_value)?;
            Ok((r, "prevalence (no general weights exist for this measure)", Some(f)))
        }
        Err(e) => Err(e.into()),
    }
}

fn collapse_check(
    kind: EffectMeasureKind,
    definition: Option<DefinitionArg>,
    weights: Option<&str>,
    doc: &InputDocument,
    places: usize,
) -> CliResult<Rendered> {
    let definition = definition.unwrap_or(match doc {
        InputDocument::Table(_) => DefinitionArg::Associational,
        _ => DefinitionArg::Causal,
    });
    let (report, source, feasibility) = match definition {
        DefinitionArg::Causal => {
            let p = population_of(doc)?;
            match weights {
                Some(text) => {
                    let w = parse_weights(text, p.labels())?;
                    (check_causal_collapsibility(kind, p, Some(&w))?, "user", None)
                }
                None => causal_report(kind, p)?,
            }
        }
        DefinitionArg::Associational => {
            let t = table_of(doc)?;
            let (w, source) = match weights {
                Some(text) => (parse_weights(text, t.labels())?, "user"),
                None => match newman_weights(kind, &t) {
                    Ok(n) => (n.weights, "newman"),
                    Err(Error::UnsupportedKind(_)) => {
                        return Err(CliError::Input(format!(
                            "no default associational weights for {kind}; pass --weights"
                        )))
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            (check_associational_collapsibility(kind, &t, &w)?, source, None)
        }
    };
    let mut json = report_json(&report, source, places);
    let mut text = report_text(&report, source, places);
    if let Some(f) = &feasibility {
        json["feasibility"] = feasibility_json(f, places);
        text.push_str("weight existence:\n");
        text.push_str(&feasibility_text(f, places));
    }
    Ok(Rendered { json, text })
}

fn feasibility(kind: EffectMeasureKind, doc: &InputDocument, places: usize) -> CliResult<Rendered> {
    let (values, marginal) = match doc {
        InputDocument::Table(t) => (t.stratum_effects(kind), t.marginal_effect(kind)?),
        _ => {
            let p = population_of(doc)?;
            (stratum_effects(kind, p), marginal_effect(kind, p)?)
        }
    };
    let f = weight_feasibility(&values, &marginal)?;
    let mut json = feasibility_json(&f, places);
    json["kind"] = json!(kind);
    Ok(Rendered {
        text: format!("{kind}\n{}", feasibility_text(&f, places)),
        json,
    })
}

fn standardize(kind: EffectMeasureKind, doc: &InputDocument, places: usize) -> CliResult<Rendered> {
    let t = table_of(doc)?;
    let risks = collapsekit_core::identify::standardized_risks(&t)?;
    let value = standardized_effect(kind, &t)?;
    let RiskPair { r0, r1 } = &risks;
    Ok(Rendered {
        json: json!({
            "kind": kind,
            "standardized_risks": { "r0": r0.to_string(), "r1": r1.to_string() },
            "value": format_rational(&value),
            "decimal": decimal(&value, places),
        }),
        text: format!(
            "standardized risks: r0 = {}, r1 = {}\n{kind}: {}\n",
            both(r0.value(), places),
            both(r1.value(), places),
            both(&value, places)
        ),
    })
}

fn scenario(name: &str) -> CliResult<Rendered> {
    let s = builtin_scenario(name)?;
    let mut text = format!("{}: {}\n", s.name, s.description);
    for st in s.population.strata() {
        let r = st.risks();
        text.push_str(&format!(
            "  {}: prevalence {}, risk0 {}, risk1 {}\n",
            st.label(),
            st.prevalence(),
            r.r0,
            r.r1
        ));
    }
    Ok(Rendered {
        json: serde_json::to_value(ScenarioDoc::from(&s)).expect("scenario serializes"),
        text,
    })
}

/// Strata where the kind's canonical identity is guaranteed: the conditioning
/// event of its weights must be possible everywhere, and the odds ratio needs
/// interior risks to be defined at all.
fn accepts(kind: EffectMeasureKind, p: &CounterfactualPopulation) -> bool {
    p.strata().iter().all(|s| {
        let r = s.risks();
        let interior = |x: &collapsekit_core::Probability| !x.is_zero() && !x.is_one();
        match kind {
            EffectMeasureKind::Rd => true,
            EffectMeasureKind::RrMinus => !r.r0.is_zero(),
            EffectMeasureKind::RrPlus => !r.r0.is_one(),
            EffectMeasureKind::InvRrMinus => !r.r1.is_zero(),
            EffectMeasureKind::InvRrPlus => !r.r1.is_one(),
            EffectMeasureKind::Or => interior(&r.r0) && interior(&r.r1),
        }
    })
}

fn simulate(cfg: &GeneratorConfig, kind: EffectMeasureKind, count: u64, places: usize) -> CliResult<Rendered> {
    if count == 0 {
        return Err(CliError::Input("--count must be at least 1".into()));
    }
    let mut runs = Vec::new();
    let mut text = format!("rng: {RNG_ALGORITHM}\n");
    for seed in cfg.seed..cfg.seed.saturating_add(count) {
        let cfg = GeneratorConfig { seed, ..cfg.clone() };
        let p = random_population_where(&cfg, |p| accepts(kind, p))?;
        let m = random_mechanism(&cfg, &p)?;
        let (report, source, feasibility) = causal_report(kind, &p)?;
        let table = apply_assignment(&p, &m)?;

        let identification = match (
            identify_rr_minus_weights(&table),
            causal_weights(EffectMeasureKind::RrMinus, &p),
        ) {
            (Ok(identified), Ok(causal)) => json!({
                "identified_weights": weights_doc(&identified),
                "causal_weights": weights_doc(&causal),
                "equal": identified == causal,
            }),
            (a, b) => json!({
                "undefined": a.err().or(b.err()).map(|e| e.to_string()),
            }),
        };
        let standardized = match (standardized_effect(kind, &table), marginal_effect(kind, &p)) {
            (Ok(s), Ok(m)) => json!({
                "value": format_rational(&s),
                "causal_marginal": format_rational(&m),
                "equal": s == m,
            }),
            (a, b) => json!({ "undefined": a.err().or(b.err()).map(|e| e.to_string()) }),
        };
        let conditional = check_conditional_exchangeability(&p, &m)?;
        let marginal = check_marginal_exchangeability(&p, &m)?;

        text.push_str(&format!(
            "seed {seed}: {kind} residual {} ({}), conditional exchangeability {}/{}, identification {}\n",
            format_rational(&report.residual),
            if report.collapsible { "collapsible" } else { "not collapsible" },
            conditional.a0,
            conditional.a1,
            identification["equal"].as_bool().map_or("undefined".to_string(), |e| e.to_string()),
        ));
        let mut run = json!({
            "seed": seed,
            "population": PopulationDoc::from(&p),
            "mechanism": MechanismDoc::from(&m),
            "report": report_json(&report, source, places),
            "exchangeability": { "conditional": conditional, "marginal": marginal },
            "identification": identification,
            "standardized": standardized,
        });
        if let Some(f) = &feasibility {
            run["feasibility"] = feasibility_json(f, places);
        }
        runs.push(run);
    }
    Ok(Rendered {
        json: json!({
            "metadata": {
                "rng": RNG_ALGORITHM,
                "seed": cfg.seed,
                "count": count,
                "strata": cfg.stratum_count,
                "denominator_bound": cfg.denominator_bound,
                "confounded": cfg.confounded,
                "kind": kind,
            },
            "runs": runs,
        }),
        text,
    })
}

fn validate(doc: &InputDocument) -> Rendered {
    let (kind, strata) = match doc {
        InputDocument::Scenario(s) => ("scenario", s.population.len()),
        InputDocument::Population(p) => ("population", p.len()),
        InputDocument::Table(t) => ("table", t.len()),
        InputDocument::Target(t) => ("unexposed-target", t.len()),
    };
    Rendered {
        json: json!({ "valid": true, "document": kind, "strata": strata }),
        text: format!("valid {kind} with {strata} strata\n"),
    }
}
