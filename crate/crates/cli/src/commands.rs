use std::fs;
use std::path::Path;

use cantor_core::approximation::{
    build_approximant, check_corollary22, check_prop23, check_theorem21, find_repetition, schmidt_triples,
    InequalityReport, IntSequence, Prop23Variant, Thm21Variant,
};
use cantor_core::exact::{format_rational, parse_rational};
use cantor_core::numeration::{cumulative_products, find_sparse_multiple_with, to_digits, weight, RadixSequence};
use cantor_core::product::{boundedness_report, copy_structure, evaluate_with_depth, expand, ProductSpec};
use cantor_core::tm::{
    build_word, letter, periodicity_witness, subsequence_period_scan, subsequence_value, to_product_spec, TMSpec,
    ValueMap,
};
use cantor_core::{CoefficientValue, Error, Exec};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{Command, Prop23Choice, Thm21Choice};

/// A finished command: what it concluded, what backs that up, and an
/// optional flat table for CSV output.
pub struct Outcome {
    pub verdict: Value,
    pub evidence: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Failure of a command, already classified for the exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
    pub hypothesis: bool,
}

impl Failure {
    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        Failure { code, message: message.into(), hypothesis: false }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.code(), message: e.to_string(), hypothesis: e.is_hypothesis_failure() }
    }
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input("IO", format!("{}: {e}", path.display())))
}

fn product_spec(path: &Path) -> Result<ProductSpec, Failure> {
    Ok(ProductSpec::from_json(&read(path)?)?)
}

fn tm_spec(path: &Path) -> Result<TMSpec, Failure> {
    Ok(TMSpec::from_json(&read(path)?)?)
}

/// A bare radix, or the `radix` field of any spec.
fn radix(path: Option<&Path>) -> Result<RadixSequence, Failure> {
    let Some(path) = path else { return Ok(RadixSequence::binary()) };
    let value: Value = serde_json::from_str(&read(path)?).map_err(|e| Error::SpecParse(e.to_string()))?;
    let inner = value.get("radix").cloned().unwrap_or(value);
    let r: RadixSequence = serde_json::from_value(inner).map_err(|e| Error::SpecParse(e.to_string()))?;
    r.validate()?;
    Ok(r)
}

fn rational(text: &str) -> Result<BigRational, Failure> {
    Ok(parse_rational(text)?)
}

fn natural(text: &str) -> Result<BigUint, Failure> {
    text.trim().parse().map_err(|_| Failure::input("INVALID_ARGUMENT", format!("not a nonnegative integer: {text:?}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn inequality(report: InequalityReport) -> Outcome {
    let holds: Vec<Value> = report.rows.iter().map(|r| json!({"n": r.n, "holds": r.holds})).collect();
    let rows = report
        .rows
        .iter()
        .map(|r| {
            let lhs = r.lhs_log2.as_ref().map_or_else(|| "-inf".to_owned(), format_rational);
            vec![r.n.to_string(), lhs, format_rational(&r.rhs_log2), r.holds.to_string()]
        })
        .collect();
    Outcome {
        verdict: json!({"summary": report.summary, "rows": holds}),
        evidence: to_value(&report),
        table: Some(Table { header: vec!["n", "lhs_log2", "rhs_log2", "holds"], rows }),
    }
}

/// `m,num,den`, or `m,residue` for unit-root values. Denominators too large
/// to write out appear as `base^exp`.
fn coefficient_table(values: &[CoefficientValue]) -> Table {
    if values.iter().all(|v| matches!(v, CoefficientValue::UnitRoot { .. })) {
        let rows = values
            .iter()
            .enumerate()
            .map(|(m, v)| {
                let CoefficientValue::UnitRoot { residue, .. } = v else { unreachable!() };
                vec![m.to_string(), residue.to_string()]
            })
            .collect();
        return Table { header: vec!["m", "residue"], rows };
    }
    let rows = values
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let num = v.numerator().map_or_else(|_| v.to_string(), |n| n.to_string());
            let den = v.denominator().map_or_else(|_| String::new(), |d| d.to_string());
            vec![m.to_string(), num, den]
        })
        .collect();
    Table { header: vec!["m", "num", "den"], rows }
}

fn expansion(spec: &ProductSpec, tail: usize, count: usize) -> Run {
    let values = expand(spec, tail, count)?;
    Ok(Outcome {
        verdict: json!({"tail": tail, "coefficients": values}),
        evidence: json!({"spec": spec}),
        table: Some(coefficient_table(&values)),
    })
}

pub fn run(command: &Command) -> Run {
    match command {
        Command::Digits { spec, n } => {
            let r = radix(spec.as_deref())?;
            let n = natural(n)?;
            let digits = to_digits(&n, &r);
            let top = digits.entries().last().map_or(0, |&(p, _)| p + 1);
            let weights: Vec<String> = cumulative_products(&r, top).iter().map(ToString::to_string).collect();
            Ok(Outcome {
                verdict: json!({"n": n.to_string(), "digits": digits.to_pairs()}),
                evidence: json!({"radix": r, "weights": weights}),
                table: Some(Table {
                    header: vec!["position", "digit"],
                    rows: digits.iter().map(|(p, s)| vec![p.to_string(), s.to_string()]).collect(),
                }),
            })
        }
        Command::SparseMultiple { spec, l, t, cap } => {
            let r = radix(spec.as_deref())?;
            let x = find_sparse_multiple_with(Exec::default(), *l, *t, &r, *cap)?;
            let multiple = BigUint::from(*l) * x;
            let digits = to_digits(&multiple, &r);
            Ok(Outcome {
                verdict: json!({"l": l, "t": t, "x": x.to_string()}),
                evidence: json!({"radix": r, "multiple": multiple.to_string(), "digits": digits.to_pairs()}),
                table: Some(Table {
                    header: vec!["l", "t", "x", "multiple"],
                    rows: vec![vec![l.to_string(), t.to_string(), x.to_string(), multiple.to_string()]],
                }),
            })
        }
        Command::Expand { spec, count } => expansion(&product_spec(&spec.spec)?, 0, *count),
        Command::TailExpand { spec, n, count } => expansion(&product_spec(&spec.spec)?, *n, *count),
        Command::CopyStructure { spec, n, blocks } => {
            let spec = product_spec(&spec.spec)?;
            let scalars = copy_structure(&spec, *n, *blocks)?;
            let block_len = weight(&spec.radix, *n);
            Ok(Outcome {
                verdict: json!({"holds": true, "scalars": scalars}),
                evidence: json!({"level": n, "block_length": block_len.to_string(), "blocks": blocks}),
                table: Some(Table {
                    header: vec!["block", "scalar"],
                    rows: scalars.iter().enumerate().map(|(l, v)| vec![l.to_string(), v.to_string()]).collect(),
                }),
            })
        }
        Command::Evaluate { spec, b, target } => {
            let spec = product_spec(&spec.spec)?;
            let target = rational(target)?;
            let (interval, depth) = evaluate_with_depth(&spec, *b, &target)?;
            let width = format_rational(&interval.width());
            let row = vec![format_rational(&interval.lo), format_rational(&interval.hi)];
            Ok(Outcome {
                verdict: json!({"interval": interval}),
                evidence: json!({"b": b, "target": format_rational(&target), "depth": depth, "width": width}),
                table: Some(Table { header: vec!["lo", "hi"], rows: vec![row] }),
            })
        }
        Command::BoundedReport { spec, n_max, m_max } => {
            let report = boundedness_report(&product_spec(&spec.spec)?, *n_max, *m_max)?;
            Ok(Outcome {
                verdict: json!({"sup_ratio": format_rational(&report.sup_ratio)}),
                evidence: to_value(&report),
                table: None,
            })
        }
        Command::Witness { spec, n, window } => {
            let w = find_repetition(&product_spec(&spec.spec)?, *n, *window)?;
            Ok(Outcome { verdict: to_value(&w), evidence: json!({"window": window}), table: None })
        }
        Command::Approximant { spec, n, window } => {
            let spec = product_spec(&spec.spec)?;
            let a = build_approximant(&spec, &find_repetition(&spec, *n, *window)?)?;
            let rows = a.p.iter().enumerate().map(|(m, v)| vec![m.to_string(), format_rational(v)]).collect();
            Ok(Outcome {
                verdict: json!({"p": to_value(&a)["p"], "C": a.c.to_string()}),
                evidence: to_value(&a),
                table: Some(Table { header: vec!["degree", "coefficient"], rows }),
            })
        }
        Command::CheckThm21 { spec, b, epsilon, variant, range, l } => {
            let variant = match variant {
                Thm21Choice::First => Thm21Variant::First,
                Thm21Choice::Second => Thm21Variant::Second,
            };
            let spec = product_spec(&spec.spec)?;
            Ok(inequality(check_theorem21(&spec, *b, &rational(epsilon)?, variant, range.clone(), *l)?))
        }
        Command::CheckProp23 { spec, b, c, epsilon, variant, range } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Pair {
                f: IntSequence,
                #[serde(rename = "F")]
                big_f: IntSequence,
            }
            let pair: Pair = serde_json::from_str(&read(&spec.spec)?).map_err(|e| Error::SpecParse(e.to_string()))?;
            let variant = match variant {
                Prop23Choice::Main => Prop23Variant::Main,
                Prop23Choice::Remark => Prop23Variant::Remark,
            };
            let eps = rational(epsilon)?;
            Ok(inequality(check_prop23(&pair.f, &pair.big_f, *b, *c, &eps, variant, range.clone())?))
        }
        Command::Cor22 { b0, b, epsilon, range } => {
            Ok(inequality(check_corollary22(*b0, *b, &rational(epsilon)?, range.clone())?))
        }
        Command::SchmidtReport { spec, b, range } => {
            let report = schmidt_triples(&product_spec(&spec.spec)?, *b, range.clone())?;
            let csv = report.to_csv();
            let mut lines = csv.lines().map(|l| l.split(',').map(str::to_owned).collect::<Vec<_>>());
            lines.next();
            let decay: Vec<Value> = report
                .triples
                .iter()
                .map(|t| json!({"n": t.n, "log2_linear_form": t.log2_linear_form, "log2_height": t.log2_height}))
                .collect();
            Ok(Outcome {
                verdict: json!({"form": report.form, "decay": decay}),
                evidence: to_value(&report),
                table: Some(Table {
                    header: vec!["n", "log_linear_form", "log_height", "ratio"],
                    rows: lines.collect(),
                }),
            })
        }
        Command::TmBuild { spec, n, block } => {
            let word = build_word(&tm_spec(&spec.spec)?, *n)?;
            Ok(Outcome {
                verdict: json!({"letters": word.letters}),
                evidence: json!({"level": word.level, "length": word.len(), "text": block.map(|b| word.to_text(Some(b)))}),
                table: Some(Table {
                    header: vec!["m", "letter"],
                    rows: word.letters.iter().enumerate().map(|(m, x)| vec![m.to_string(), x.to_string()]).collect(),
                }),
            })
        }
        Command::TmLetter { spec, m } => {
            let spec = tm_spec(&spec.spec)?;
            let m = natural(m)?;
            let digits = to_digits(&m, &spec.radix);
            Ok(Outcome {
                verdict: json!({"m": m.to_string(), "letter": letter(&spec, &m)}),
                evidence: json!({"L": spec.l, "digits": digits.to_pairs()}),
                table: None,
            })
        }
        Command::TmPeriod { spec, depth } => {
            let v = periodicity_witness(&tm_spec(&spec.spec)?, *depth);
            Ok(Outcome { verdict: to_value(&v), evidence: json!({"depth": depth}), table: None })
        }
        Command::TmSubseqValue { spec, start, step, b, target, values } => {
            let spec = tm_spec(&spec.spec)?;
            let map = match values {
                None => ValueMap::Roots,
                Some(v) => ValueMap::Table(v.iter().map(|t| rational(t)).collect::<Result<_, _>>()?),
            };
            let target = rational(target)?;
            let value = subsequence_value(&spec, &map, *start, *step, *b, &target)?;
            let rows = value
                .components
                .iter()
                .enumerate()
                .map(|(i, c)| vec![i.to_string(), format_rational(&c.lo), format_rational(&c.hi)])
                .collect();
            Ok(Outcome {
                verdict: json!({"basis": value.basis, "components": value.components}),
                evidence: json!({"N": start, "l": step, "b": b, "terms": value.terms, "target": format_rational(&target)}),
                table: Some(Table { header: vec!["component", "lo", "hi"], rows }),
            })
        }
        Command::TmSubseqScan { spec, start, step, max_period, horizon } => {
            let v = subsequence_period_scan(&tm_spec(&spec.spec)?, *start, *step, *max_period, *horizon)?;
            Ok(Outcome {
                verdict: to_value(&v),
                evidence: json!({"N": start, "l": step, "max_period": max_period, "horizon": horizon}),
                table: None,
            })
        }
        Command::TmToProduct { spec } => {
            let spec = tm_spec(&spec.spec)?;
            Ok(Outcome {
                verdict: to_value(&to_product_spec(&spec)),
                evidence: json!({"word_spec": spec}),
                table: None,
            })
        }
    }
}
