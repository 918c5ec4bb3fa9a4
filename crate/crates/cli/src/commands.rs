use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde_json::{json, Value};

use bifix_core::automata::{is_bifix_free, is_minimal, normalize, transition_semigroup, Dfa};
use bifix_core::conflicts::{prune, ForcesMode};
use bifix_core::phimap::{audit_injectivity_with, phi_record, Variant, BOUND_MIN_STATES};
use bifix_core::semigroups::{self, close, pair_statuses, wge6_size, Semigroup};
use bifix_core::transmap::{read_lines, write_lines, Transformation};
use bifix_core::{Error, Result};

use crate::{Ctx, NRange, Outcome, SetName};

pub fn read_set(path: &Path) -> Result<(usize, Vec<Transformation>)> {
    read_lines(BufReader::new(File::open(path)?))
}

pub fn read_dfa(path: &Path) -> Result<Dfa> {
    Dfa::from_json(&fs::read_to_string(path)?)
}

fn write_set(path: &Path, n: usize, items: &[Transformation]) -> Result<()> {
    write_lines(BufWriter::new(File::create(path)?), n, items)
}

fn cached(ctx: &Ctx, name: &str, n: usize, f: impl FnOnce() -> Result<Semigroup>) -> Result<Vec<Transformation>> {
    match &ctx.cache {
        Some(c) => c.get_or_compute(name, n, || Ok(f()?.sorted())),
        None => Ok(f()?.sorted()),
    }
}

/// Elements of a named set in canonical order, through the cache if any.
pub fn named_set(ctx: &Ctx, set: SetName, n: usize) -> Result<Vec<Transformation>> {
    match set {
        SetName::Bbf => cached(ctx, "bbf", n, || semigroups::enumerate_bbf(n)),
        SetName::Wge6 => cached(ctx, "wge6", n, || semigroups::enumerate_wge6(n)),
        SetName::Wle5 => cached(ctx, "wle5", n, || semigroups::enumerate_wle5(n)),
        SetName::WitnessLetters => semigroups::witness_letters(n),
    }
}

pub fn gen(ctx: &Ctx, set: SetName, n: NRange, out: Option<&Path>, csv: bool) -> Result<Outcome> {
    if out.is_some() && n.single().is_none() {
        return Err(Error::Domain("--out needs a single n".into()));
    }
    let mut rows = Vec::new();
    let mut table = String::from("set,n,count\n");
    let label = serde_json::to_value(set)?;
    for k in n.iter() {
        let items = named_set(ctx, set, k)?;
        if let Some(path) = out {
            write_set(path, k, &items)?;
        }
        table.push_str(&format!("{},{k},{}\n", label.as_str().unwrap(), items.len()));
        rows.push(json!({"n": k, "count": items.len()}));
    }
    let results = match n.single() {
        Some(k) => json!({"set": set, "n": k, "count": rows[0]["count"], "out": out}),
        None => json!({"set": set, "sizes": rows}),
    };
    let mut o = Outcome::new(results, true);
    if csv {
        o.raw = Some(table);
    }
    Ok(o)
}

pub fn closure(set: Option<&Path>, dfa: Option<&Path>, out: Option<&Path>) -> Result<Outcome> {
    let (n, gens) = match (set, dfa) {
        (Some(p), _) => read_set(p)?,
        (None, Some(p)) => {
            let d = read_dfa(p)?;
            (d.n(), d.delta().to_vec())
        }
        (None, None) => return Err(Error::Domain("need --set or --dfa".into())),
    };
    let s = if gens.is_empty() {
        Semigroup::empty(n)
    } else {
        close(&gens)?
    };
    let sorted = s.sorted();
    if let Some(p) = out {
        write_set(p, n, &sorted)?;
    }
    let in_bbf = sorted.iter().all(semigroups::in_bbf);
    let in_wge6 = sorted.iter().all(semigroups::in_wge6);
    let equals_wge6 = in_wge6 && n >= 3 && sorted.len() as u64 == wge6_size(n);
    Ok(Outcome::new(
        json!({
            "n": n,
            "generators": gens.len(),
            "size": sorted.len(),
            "all_in_bbf": in_bbf,
            "subset_of_wge6": in_wge6,
            "equals_wge6": equals_wge6,
            "out": out,
        }),
        true,
    ))
}

pub fn witness(n: usize, out: Option<&Path>, verify: bool) -> Result<Outcome> {
    let d = semigroups::witness_dfa(n)?;
    if let Some(p) = out {
        fs::write(p, d.to_json())?;
    }
    let mut results = json!({
        "n": n,
        "alphabet": d.alphabet_size(),
        "alphabet_formula": semigroups::witness_alphabet_size(n),
        "out": out,
    });
    let mut ok = d.alphabet_size() as u64 == semigroups::witness_alphabet_size(n);
    if verify {
        let c = close(d.delta())?;
        let equal = c.same_set(&semigroups::enumerate_wge6(n)?);
        results["closure_size"] = json!(c.len());
        results["equals_wge6"] = json!(equal);
        ok &= equal;
    }
    if out.is_none() {
        results["dfa"] = serde_json::from_str(&d.to_json())?;
    }
    Ok(Outcome::new(results, ok))
}

pub fn analyze(path: &Path) -> Result<Outcome> {
    let d = read_dfa(path)?;
    let n = d.n();
    let minimal = is_minimal(&d);
    let mut results = json!({"n": n, "alphabet": d.alphabet_size(), "minimal": minimal});
    if !minimal {
        return Ok(Outcome::new(results, true));
    }
    let report = is_bifix_free(&d)?;
    results["bifix_free"] = json!(report.is_bifix());
    results["freeness"] = serde_json::to_value(&report)?;
    if !report.is_bifix() {
        return Ok(Outcome::new(results, true));
    }
    let d = normalize(&d)?;
    let t = transition_semigroup(&d)?;
    let bound = if n >= 3 { Some(wge6_size(n)) } else { None };
    let within = bound.map(|b| t.len() as u64 <= b);
    results["syntactic_complexity"] = json!(t.len());
    results["bound"] = json!(bound);
    results["within_bound"] = json!(within);
    results["bound_applies"] = json!(n >= BOUND_MIN_STATES);
    let mut ok = true;
    if n >= 5 && !t.is_empty() {
        let census = pair_statuses(&t)?;
        let colliding: Vec<_> = census.iter().filter(|p| p.is_colliding()).map(|p| p.pair).collect();
        let focused: Vec<_> = census.iter().filter(|p| p.is_focused()).map(|p| p.pair).collect();
        results["pairs"] = json!({"colliding": colliding, "focused": focused});
        if n >= BOUND_MIN_STATES && !colliding.is_empty() {
            let strict = (t.len() as u64) < wge6_size(n);
            results["strictly_below_bound"] = json!(strict);
            ok &= strict;
        }
    }
    if n >= BOUND_MIN_STATES {
        ok &= within == Some(true);
    }
    Ok(Outcome::new(results, ok))
}

pub fn phi(n: usize, dfa: Option<&Path>, set: Option<&Path>, audit: bool, amended: bool) -> Result<Outcome> {
    let variant = if amended { Variant::Amended } else { Variant::Standard };
    let t = match (dfa, set) {
        (Some(p), _) => {
            let d = read_dfa(p)?;
            if !is_minimal(&d) {
                return Err(Error::Precondition("DFA is not minimal".into()));
            }
            transition_semigroup(&normalize(&d)?)?
        }
        (None, Some(p)) => {
            let (m, items) = read_set(p)?;
            Semigroup::from_set(m, items)?
        }
        (None, None) => return Err(Error::Domain("need --dfa or --set".into())),
    };
    if t.n() != n {
        return Err(Error::Dimension(format!("--n {n} but the input has {} states", t.n())));
    }
    let mut records = Vec::with_capacity(t.len());
    for x in t.sorted() {
        let r = phi_record(&x, variant)?;
        records.push(json!({
            "t": r.t,
            "label": r.label.case,
            "subsubcase": r.label.subsubcase,
            "s": r.s,
        }));
    }
    let report = audit_injectivity_with(&t, variant)?;
    let mut summary = json!({
        "size": t.len(),
        "variant": variant,
        "image_in_wge6": report.image_in_wge6,
        "labels": report
            .label_counts
            .iter()
            .map(|(l, c)| (l.to_string(), json!(c)))
            .collect::<serde_json::Map<String, Value>>(),
    });
    let mut ok = report.image_in_wge6;
    if audit {
        summary["audit"] = json!({
            "injective": report.injective,
            "collisions": report.collisions,
            "has_colliding_pair": report.has_colliding_pair,
            "strictly_smaller": report.strictly_smaller,
            "sentinel": report.sentinel,
            "sentinel_absent": report.sentinel_absent,
            "holds": report.holds(),
        });
        ok &= report.holds();
    }
    Ok(Outcome::new(json!({"records": records, "summary": summary}), ok))
}

pub fn uniqueness(n: usize, trace: Option<&Path>, mode: ForcesMode) -> Result<Outcome> {
    let tr = prune(n, mode)?;
    if let Some(p) = trace {
        fs::write(p, serde_json::to_string(&tr)?)?;
    }
    let ok = !tr.failed && tr.sizes.last() == Some(&0);
    Ok(Outcome::new(tr.summary_json(), ok))
}
