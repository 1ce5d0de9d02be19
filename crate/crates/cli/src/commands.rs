//! The computations behind each subcommand. Every function is a pure
//! pipeline from loaded inputs to an [`Outcome`].

use std::sync::Arc;

use hopfkit::comodule::f_frobenius_element;
use hopfkit::invariants::{invariants as bundle, verify_pivotal, verify_radford};
use hopfkit::io::{comodule_spec, map_spec, HopfSpec, Loader, Source};
use hopfkit::maps::classify;
use hopfkit::yd::{frobenius_form_check, invariant_forms, nat_algebra};
use hopfkit::{
    Builtin, Check, Descriptor, Error, Field, HLBimodule, HopfAlgebra, PerfectMode, Perfectness, Report, Result,
    Scalar, SearchOptions,
};
use serde_json::{json, Value};

/// Checks, result payload and diagnostics of one command run.
#[derive(Debug, Default)]
pub struct Outcome {
    pub ok: bool,
    pub checks: Vec<Check>,
    pub result: Value,
    pub witnesses: Vec<String>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn from_report(report: Report, result: Value) -> Outcome {
        let witnesses = failure_witnesses(&report);
        Outcome {
            ok: report.all_passed(),
            checks: report.checks,
            result,
            witnesses,
            warnings: Vec::new(),
        }
    }

    /// Verification failures and inconsistency traps become failing reports;
    /// every other error is returned.
    pub fn from_error(e: Error) -> Result<Outcome> {
        match e {
            Error::Verification(report) => {
                let mut out = Outcome::from_report(*report, Value::Null);
                out.ok = false;
                Ok(out)
            }
            Error::Inconsistent(msg) => Ok(Outcome {
                ok: false,
                result: Value::Null,
                warnings: vec![format!("inconsistency: {msg}")],
                ..Outcome::default()
            }),
            other => Err(other),
        }
    }
}

fn failure_witnesses(r: &Report) -> Vec<String> {
    r.failures()
        .map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or("failed")))
        .collect()
}

fn labelled(h: &HopfAlgebra, values: &[Scalar]) -> Value {
    Value::Array(
        values
            .iter()
            .enumerate()
            .map(|(i, c)| json!([h.label(i), c.to_string()]))
            .collect(),
    )
}

/// k with z^k = x, when x is a power of the field's primitive root.
fn root_exponent(field: &Field, x: &Scalar) -> Option<usize> {
    let z = field.zeta()?;
    let mut p = field.one();
    for k in 0..4096 {
        if &p == x {
            return Some(k);
        }
        p = &p * &z;
        if p.is_one() {
            break;
        }
    }
    None
}

pub fn verify(loader: &Loader, r: &str) -> Result<Outcome> {
    let h = loader.hopf_unchecked(&Source::Ref(r.into()))?;
    let report = h.verify_axioms();
    let mode = if report.subject.ends_with("(exhaustive)") { "exhaustive" } else { "presentation" };
    Ok(Outcome::from_report(
        report,
        json!({
            "name": h.name(),
            "field": h.field().spec().to_string(),
            "dim": h.dim(),
            "mode": mode,
        }),
    ))
}

pub fn invariants(loader: &Loader, r: &str, pivots: &[String]) -> Result<Outcome> {
    let h = loader.hopf(&Source::Ref(r.into()))?;
    let b = bundle(&h)?;
    let summary = b.summary(&h, 64);
    let radford_ok = verify_radford(&h, &b)?;
    let checks = vec![
        Check::from_witness("integral_identities", b.self_check(&h)),
        if radford_ok { Check::pass("radford") } else { Check::fail("radford", "g_H is not a module map k_ᾱ ⊗ H → H_{S⁴} ⊗ k_ᾱ") },
    ];
    let mut pivotal = Vec::new();
    for expr in pivots {
        let g = h.parse_element(expr)?;
        let verdict = verify_pivotal(&h, &g)?;
        pivotal.push(json!({ "candidate": h.format_element(&g), "pivotal": verdict }));
    }
    let exponents: Vec<Value> = summary
        .alpha
        .iter()
        .map(|(label, _)| {
            let i = h.index_of(label).expect("label from the same algebra");
            json!([label, root_exponent(h.field(), &b.alpha[i])])
        })
        .collect();
    let mut result = serde_json::to_value(&summary).expect("serializable");
    result["alpha_root_exponents"] = Value::Array(exponents);
    result["radford_ok"] = json!(radford_ok);
    result["pivotal"] = Value::Array(pivotal);
    let report = Report { subject: h.name().to_string(), checks };
    Ok(Outcome::from_report(report, result))
}

pub fn classify_map(loader: &Loader, r: &str, mode: PerfectMode) -> Result<Outcome> {
    let f = loader.map_unchecked(&Source::Ref(r.into()))?;
    let report = f.verify();
    if !report.all_passed() {
        return Ok(Outcome::from_report(report, json!({ "valid": false })));
    }
    let c = classify(&f, mode)?;
    let mut result = serde_json::to_value(&c).expect("serializable");
    result["chi_f"] = labelled(f.source(), &c.chi_f);
    result["source"] = json!(f.source().name());
    result["target"] = json!(f.target().name());
    let mut out = Outcome::from_report(report, result);
    out.witnesses.extend(c.witnesses.iter().cloned());
    match c.perfect {
        Perfectness::Asserted => out.warnings.push("perfectness asserted by the caller, not checked".into()),
        Perfectness::Skipped => out.warnings.push("perfectness not evaluated; the classification presupposes it".into()),
        Perfectness::NotPerfect => out.warnings.push("f is not perfect; the classification presupposes it".into()),
        Perfectness::Perfect => {}
    }
    Ok(out)
}

pub fn f_frobenius(loader: &Loader, map: &str, comodule: &str, opts: SearchOptions) -> Result<Outcome> {
    let f = loader.map_unchecked(&Source::Ref(map.into()))?;
    let report = f.verify();
    if !report.all_passed() {
        return Ok(Outcome::from_report(report, Value::Null));
    }
    let l = loader.comodule(&Source::Ref(comodule.into()))?;
    let r = f_frobenius_element(&f, &l, opts)?;
    let mut out = Outcome::from_report(report, serde_json::to_value(&r).expect("serializable"));
    out.warnings.extend(r.warnings.iter().cloned());
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FormChoice {
    /// integral for L = k, cointegral for L = H, otherwise the unique YD-invariant form
    Auto,
    Integral,
    RightIntegral,
    Cointegral,
}

pub fn nat(
    loader: &Loader,
    hopf: &str,
    comodule: &str,
    bimodule: Option<&str>,
    pivot: Option<&str>,
    form: FormChoice,
) -> Result<Outcome> {
    let h = loader.hopf(&Source::Ref(hopf.into()))?;
    let l = loader.comodule(&Source::Ref(comodule.into()))?;
    if l.hopf().fingerprint() != h.fingerprint() {
        return Err(Error::InvalidParameter(format!("{comodule} is not a comodule algebra over {hopf}")));
    }
    let p = match bimodule {
        Some(b) => loader.bimodule(b)?,
        None => HLBimodule::regular(&l),
    };
    let nat = nat_algebra(&p, bimodule.is_none())?;
    let a = &nat.algebra;
    let mut report = a.verify();
    report.subject = "T^L(H, P)".into();
    let mut warnings = Vec::new();
    let mut pivot_vec = None;
    if let Some(expr) = pivot {
        let g = h.parse_element(expr)?;
        if verify_pivotal(&h, &g)? {
            report.push(Check::pass("pivotal_element"));
            pivot_vec = Some(g);
        } else {
            report.push(Check::fail("pivotal_element", format!("{expr} is not pivotal")));
        }
    }
    let regular = bimodule.is_none() && l.is_regular();
    let chosen = match form {
        FormChoice::Integral => Some(("integral", nat.integral_form()?)),
        FormChoice::RightIntegral => Some(("right_integral", nat.right_integral_form()?)),
        FormChoice::Cointegral => Some(("cointegral", nat.cointegral_form()?)),
        FormChoice::Auto if bimodule.is_none() && l.dim() == 1 => Some(("integral", nat.integral_form()?)),
        FormChoice::Auto if regular => Some(("cointegral", nat.cointegral_form()?)),
        FormChoice::Auto => {
            let mut forms = invariant_forms(&a.module);
            if forms.len() == 1 {
                Some(("invariant", forms.remove(0)))
            } else {
                warnings.push(format!("{} YD-invariant forms on A; no form checked", forms.len()));
                None
            }
        }
    };
    let (form_name, form_report) = match &chosen {
        Some((name, lam)) => {
            let r = frobenius_form_check(a, lam, pivot_vec.as_ref())?;
            warnings.extend(r.notes.iter().cloned());
            (json!(name), serde_json::to_value(&r).expect("serializable"))
        }
        None => (Value::Null, Value::Null),
    };
    let result = json!({
        "hopf": h.name(),
        "hopf_dim": h.dim(),
        "comodule_dim": l.dim(),
        "bimodule_dim": p.dim(),
        "dual_tensor_dim": nat.t.target_dim,
        "algebra_dim": a.dim(),
        "commutative": a.is_commutative(),
        "form": form_name,
        "pairing_rank": form_report.get("pairing_rank").cloned().unwrap_or(Value::Null),
        "form_report": form_report,
    });
    let mut out = Outcome::from_report(report, result);
    out.warnings = warnings;
    Ok(out)
}

/// The spec file for a builtin: full tables for Hopf algebras, references to
/// builtin endpoints (inlined when there is no descriptor) for maps and
/// comodule algebras.
pub fn builtin_spec(d: &Descriptor) -> Result<Value> {
    let inline = |h: &Arc<HopfAlgebra>| Source::Inline(Box::new(HopfSpec::from_hopf(h)));
    let reference = |desc: Option<Descriptor>, h: &Arc<HopfAlgebra>| match desc {
        Some(d) => Source::Ref(d.to_string()),
        None => inline(h),
    };
    Ok(match d.resolve()? {
        Builtin::Hopf(h) => serde_json::to_value(HopfSpec::from_hopf(&h)),
        Builtin::Map(f) => {
            let (s, t) = d.map_endpoints();
            serde_json::to_value(map_spec(&f, reference(s, f.source()), reference(t, f.target())))
        }
        Builtin::Comodule(l) => serde_json::to_value(comodule_spec(&l, reference(d.comodule_hopf(), l.hopf()))),
    }
    .expect("serializable"))
}
