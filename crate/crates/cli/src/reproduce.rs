use serde_json::{json, Value};

use bifix_core::automata::transition_semigroup;
use bifix_core::conflicts::{prune, ForcesMode};
use bifix_core::phimap::{audit_injectivity_with, classify, phi, Variant};
use bifix_core::sample::Sampler;
use bifix_core::semigroups::{self, close, pair_statuses, wge6_rank_certificate, wge6_size, Semigroup};
use bifix_core::transmap::Transformation;
use bifix_core::{Error, Result};

use crate::commands::named_set;
use crate::{Ctx, NRange, Outcome, SetName, Target};

const EXPECTED_B1: usize = 1176;

fn range(n: Option<NRange>, lo: usize, hi: usize) -> NRange {
    n.unwrap_or(NRange { lo, hi })
}

fn set(ctx: &Ctx, name: SetName, n: usize) -> Result<Semigroup> {
    Semigroup::from_set(n, named_set(ctx, name, n)?)
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn prop_witness(ctx: &Ctx, n: usize) -> Result<Value> {
    let letters = semigroups::witness_letters(n)?;
    let c = close(&letters)?;
    let equal = c.same_set(&set(ctx, SetName::Wge6, n)?);
    let alphabet_ok = letters.len() as u64 == semigroups::witness_alphabet_size(n);
    Ok(json!({
        "n": n,
        "pass": equal && alphabet_ok,
        "closure_size": c.len(),
        "alphabet": letters.len(),
        "equals_wge6": equal,
    }))
}

fn prop_alphabet(ctx: &Ctx, n: usize) -> Result<Value> {
    let cert = wge6_rank_certificate(n)?;
    let formula = semigroups::witness_alphabet_size(n);
    let wle5 = set(ctx, SetName::Wle5, n)?;
    let wle5_irr = semigroups::irreducible_elements(&wle5)?.len();
    let rank_ok = cert.is_tight() && cert.lower_bound as u64 == formula;
    let wle5_ok = wle5_irr == factorial(n - 2);
    Ok(json!({
        "n": n,
        "pass": rank_ok && wle5_ok,
        "wge6_rank": cert,
        "wge6_alphabet_formula": formula,
        "wge6_irreducible_equals_formula": cert.irreducible as u64 == formula,
        "wle5_irreducible": wle5_irr,
        "wle5_expected": factorial(n - 2),
    }))
}

fn theorem_bound(ctx: &Ctx, n: usize) -> Result<Value> {
    let w = set(ctx, SetName::Wge6, n)?;
    let count_ok = w.len() as u64 == wge6_size(n);
    let mut outside = 0;
    if n >= 3 {
        for t in named_set(ctx, SetName::Bbf, n)? {
            if !w.contains(&phi(&t)?) {
                outside += 1;
            }
        }
    }
    Ok(json!({
        "n": n,
        "pass": count_ok && outside == 0,
        "count": w.len(),
        "formula": wge6_size(n),
        "phi_outside_wge6": outside,
    }))
}

fn theorem_unique(n: usize) -> Result<Value> {
    let tr = prune(n, ForcesMode::default())?;
    let mut v = json!({
        "n": n,
        "pass": !tr.failed && tr.sizes.last() == Some(&0),
        "sizes": tr.sizes,
        "threshold": tr.threshold,
        "failed": tr.failed,
    });
    if n == 7 {
        v["b1_matches_expected"] = json!(tr.sizes.get(1) == Some(&EXPECTED_B1));
    }
    Ok(v)
}

fn small_n(ctx: &Ctx, n: usize) -> Result<Value> {
    let bbf = named_set(ctx, SetName::Bbf, n)?;
    let wge6 = set(ctx, SetName::Wge6, n)?;
    let wle5 = set(ctx, SetName::Wle5, n)?;
    let mut pass = true;
    let mut v = json!({
        "n": n,
        "bbf": bbf.len(),
        "wge6": wge6.len(),
        "wle5": wle5.len(),
    });
    if n == 5 {
        let all = pair_statuses(&wle5)?.iter().all(|p| p.is_colliding());
        v["wle5_all_pairs_colliding"] = json!(all);
        pass &= all;
    }
    if n == 6 {
        let st = pair_statuses(&wge6)?;
        let all = st.iter().all(|p| p.is_focused() && !p.is_colliding());
        v["wge6_all_focused_none_colliding"] = json!(all);
        pass &= all;
    }
    if (6..=8).contains(&n) {
        let mut failures = 0;
        for t in &bbf {
            let ok = classify(t).is_ok() && phi(t).is_ok_and(|s| wge6.contains(&s));
            failures += !ok as usize;
        }
        v["phi_failures"] = json!(failures);
        pass &= failures == 0;
    }
    v["pass"] = json!(pass);
    Ok(v)
}

fn phi_sample(ctx: &Ctx, n: usize, count: usize, variant: Variant) -> Result<Value> {
    let sampler = Sampler::new(n)?;
    let samples = sampler.draw_many(ctx.seed, count, |i| 2 + i % 3)?;
    let mut violations = Vec::new();
    let mut largest = 0;
    let bound = wge6_size(n) as usize;
    for (i, s) in samples.iter().enumerate() {
        let t = transition_semigroup(&s.dfa)?;
        let r = audit_injectivity_with(&t, variant)?;
        largest = largest.max(t.len());
        if !r.holds() || t.len() > bound {
            let pairs: Vec<(Transformation, Transformation)> =
                r.collisions.iter().map(|c| (c.first.0, c.second.0)).collect();
            violations.push(json!({"index": i, "dfa": serde_json::from_str::<Value>(&s.dfa.to_json())?, "collisions": pairs}));
        }
    }
    Ok(json!({
        "n": n,
        "pass": violations.is_empty(),
        "variant": variant,
        "count": count,
        "max_size": largest,
        "violations": violations,
    }))
}

pub fn run(ctx: &Ctx, target: Target, n: Option<NRange>, count: usize, amended: bool) -> Result<Outcome> {
    let variant = if amended { Variant::Amended } else { Variant::Standard };
    let (r, seeded) = match target {
        Target::PropWitness => (range(n, 4, 7), false),
        Target::PropAlphabet => (range(n, 5, 7), false),
        Target::TheoremBound => (range(n, 6, 8), false),
        Target::TheoremUnique => (range(n, 7, 7), false),
        Target::SmallN => (range(n, 3, 7), false),
        Target::PhiSample => (range(n, 8, 8), true),
    };
    if target == Target::PhiSample && r.lo < 3 {
        return Err(Error::Domain("phi-sample needs n >= 3".into()));
    }
    let mut checks = Vec::new();
    for k in r.iter() {
        checks.push(match target {
            Target::PropWitness => prop_witness(ctx, k)?,
            Target::PropAlphabet => prop_alphabet(ctx, k)?,
            Target::TheoremBound => theorem_bound(ctx, k)?,
            Target::TheoremUnique => theorem_unique(k)?,
            Target::SmallN => small_n(ctx, k)?,
            Target::PhiSample => phi_sample(ctx, k, count, variant)?,
        });
    }
    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    let failures: Vec<Value> = checks
        .iter()
        .filter(|c| c["pass"] != json!(true))
        .map(|c| c["n"].clone())
        .collect();
    let mut o = Outcome::new(
        json!({"target": target, "pass": pass, "failures": failures, "checks": checks}),
        pass,
    );
    o.seeded = seeded;
    Ok(o)
}
