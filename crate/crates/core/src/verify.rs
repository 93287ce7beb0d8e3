//! Per-entry verification of a fixture corpus.
//!
//! Every entry is measured on both sides: the curve side (δ, J⁻, J⁺ and the
//! second-order value from a script or a search) and the link side (Conway
//! polynomial by two routes, Seifert surface, linking numbers). The checks
//! compare the two sides with each other and with the expectations the
//! entry ships.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::acampo::{divide_link, surface_genus};
use crate::arnold::{arf_from_j, j_divide};
use crate::corpus::CorpusEntry;
use crate::divide::validate;
use crate::knotpoly::{arf, casson_c2, conway_skein, conway_via_alexander, Verdict};
use crate::moves::{j2_auto, j2_evaluate, Outcome, ReductionScript, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub verdict: Verdict,
    /// Everything that could be computed, keyed like `#@ expect` lines.
    pub values: BTreeMap<String, i64>,
    pub checks: Vec<Check>,
}

impl EntryReport {
    fn new(name: &str) -> Self {
        EntryReport { name: name.into(), verdict: Verdict::Pass, values: BTreeMap::new(), checks: Vec::new() }
    }

    fn check(&mut self, name: &str, verdict: Verdict, detail: String) {
        self.verdict = worst(self.verdict, verdict);
        self.checks.push(Check { name: name.into(), verdict, detail });
    }

    fn agree(&mut self, name: &str, a: (&str, i64), b: (&str, i64)) {
        let detail = format!("{}={} {}={}", a.0, a.1, b.0, b.1);
        self.check(name, Verdict::of(a.1 == b.1), detail);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for EntryReport {
    /// One line: name, overall verdict, then each check.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<24} {:<10}", self.name, self.verdict)?;
        for c in &self.checks {
            write!(f, " {}:{}", c.name, c.verdict)?;
        }
        Ok(())
    }
}

fn worst(a: Verdict, b: Verdict) -> Verdict {
    let rank = |v| match v {
        Verdict::Pass => 0,
        Verdict::Incomplete => 1,
        Verdict::Fail => 2,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

/// Runs every applicable check on one entry.
pub fn check_entry(entry: &CorpusEntry, budget: SearchBudget) -> EntryReport {
    let mut r = EntryReport::new(&entry.name);
    let d = match validate(&entry.word) {
        Ok(d) => d,
        Err(e) => {
            r.check("divide", Verdict::Fail, e.to_string());
            return r;
        }
    };
    r.values.insert("delta".into(), d.delta as i64);
    r.values.insert("branches".into(), d.branch_count() as i64);

    let (sd, ld) = divide_link(&d);
    let components = ld.component_count();
    r.values.insert("components".into(), components as i64);
    r.values.insert("euler".into(), sd.euler());
    r.check(
        "components",
        Verdict::of(components == d.branch_count()),
        format!("components={components} branches={}", d.branch_count()),
    );

    if d.branch_count() == 2 {
        match ld.linking_number(0, 1) {
            Ok(lk) => {
                r.values.insert("lk".into(), lk.abs());
                r.agree("linking", ("|lk|", lk.abs()), ("shared", d.shared_double_points(0, 1) as i64));
            }
            Err(e) => r.check("linking", Verdict::Fail, e.to_string()),
        }
    }

    if d.branch_count() == 1 {
        one_branch(entry, &d, &sd, &ld, budget, &mut r);
    }

    for (key, exp) in &entry.expected {
        let name = format!("expect-{key}");
        match r.values.get(key) {
            Some(&v) => {
                let detail = format!("computed={v} expected={} ({})", exp.value, exp.provenance);
                r.check(&name, Verdict::of(v == exp.value), detail);
            }
            None if key == "j2" => r.check(&name, Verdict::Incomplete, "no value".into()),
            None => r.check(&name, Verdict::Fail, "not computed for this entry".into()),
        }
    }
    r
}

fn one_branch(
    entry: &CorpusEntry,
    d: &crate::divide::Divide,
    sd: &crate::acampo::SeifertData,
    ld: &crate::link::LinkDiagram,
    budget: SearchBudget,
    r: &mut EntryReport,
) {
    let delta = d.delta as i64;
    match surface_genus(sd) {
        Ok(g) => {
            r.values.insert("genus".into(), g as i64);
            r.agree("euler", ("euler", sd.euler()), ("1-2delta", 1 - 2 * delta));
        }
        Err(e) => r.check("euler", Verdict::Fail, e.to_string()),
    }

    let skein = conway_skein(ld);
    let c2 = match (casson_c2(&skein), conway_via_alexander(ld)) {
        (Ok(c2), Ok(alex)) => {
            let same = alex == skein;
            r.check("conway", Verdict::of(same), format!("skein={} alexander={}", skein.display("z"), alex.display("z")));
            r.values.insert("c2".into(), c2);
            Some(c2)
        }
        (Err(e), _) => {
            r.check("conway", Verdict::Fail, e.to_string());
            None
        }
        (_, Err(e)) => {
            r.check("conway", Verdict::Fail, e.to_string());
            None
        }
    };

    let j = match j_divide(d) {
        Ok(j) => j,
        Err(e) => {
            r.check("arnold", Verdict::Fail, e.to_string());
            return;
        }
    };
    let jm = j.j_minus.is_integer().then(|| j.j_minus.to_integer());
    if let Some(v) = jm {
        r.values.insert("jminus".into(), v);
    }
    if j.j_plus.is_integer() {
        r.values.insert("jplus".into(), j.j_plus.to_integer());
    }
    match (arf_from_j(d), c2) {
        (Ok(a), Some(c2)) => r.agree("corollary", ("arf(link)", arf(c2) as i64), ("jminus/2 mod 2", a as i64)),
        (Err(e), _) => r.check("corollary", Verdict::Fail, e.to_string()),
        _ => {}
    }

    if entry.skips("j2") {
        return;
    }
    let j2 = match &entry.script {
        Some(text) => match text.parse::<ReductionScript>() {
            Ok(s) => match j2_evaluate(d, &s) {
                Ok(v) => Ok(v),
                Err(e) => Err((Verdict::Fail, format!("script: {e}"))),
            },
            Err(e) => Err((Verdict::Fail, format!("script: {e}"))),
        },
        None => match j2_auto(d, budget) {
            Ok(Outcome::Value { value, .. }) => Ok(value),
            Ok(Outcome::GaveUp { nodes }) => Err((Verdict::Incomplete, format!("search gave up after {nodes} words"))),
            Err(e) => Err((Verdict::Fail, e.to_string())),
        },
    };
    match j2 {
        Ok(v) => {
            r.values.insert("j2".into(), v);
            if let Some(c2) = c2 {
                r.agree("theorem", ("c2", c2), ("j2", v));
            }
            if let Some(jm) = jm {
                r.agree("mod2", ("j2 mod 2", v.rem_euclid(2)), ("jminus/2 mod 2", (jm / 2).rem_euclid(2)));
            }
        }
        Err((verdict, detail)) => {
            r.check("theorem", verdict, detail.clone());
            r.check("mod2", verdict, detail);
        }
    }
}

/// Totals over a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub incomplete: usize,
}

impl Summary {
    pub fn of(reports: &[EntryReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Incomplete => s.incomplete += 1,
            }
        }
        s
    }
}

/// Checks entries on up to `jobs` threads; the result keeps input order.
pub fn check_all(entries: &[CorpusEntry], budget: SearchBudget, jobs: usize) -> Vec<EntryReport> {
    let jobs = jobs.clamp(1, entries.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut out: Vec<Option<EntryReport>> = vec![None; entries.len()];
    let slots: Vec<std::sync::Mutex<&mut Option<EntryReport>>> = out.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(e) = entries.get(k) else { break };
                let report = check_entry(e, budget);
                **slots[k].lock().unwrap() = Some(report);
            });
        }
    });
    drop(slots);
    out.into_iter().map(|r| r.expect("every entry checked")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURL: &str = "left 1 / b 1; x 2; d 1 / right 1";

    fn entry(name: &str, compact: &str, meta: &str) -> CorpusEntry {
        let w = crate::word::DivideWord::from_compact(name, compact).unwrap();
        CorpusEntry::parse("t.div", &format!("{}{meta}", w.to_div1())).unwrap()
    }

    #[test]
    fn curl_passes() {
        let e = entry("curl", CURL, "#@ expect c2 1 paper\n#@ expect j2 1 paper\n");
        let r = check_entry(&e, SearchBudget::default());
        assert_eq!(r.verdict, Verdict::Pass, "{r}");
        assert_eq!(r.values["genus"], 1);
        assert_eq!(r.get("theorem").unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn wrong_expectation_fails() {
        let e = entry("curl", CURL, "#@ expect c2 2 derived\n");
        let r = check_entry(&e, SearchBudget::default());
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.get("expect-c2").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn starved_search_is_incomplete() {
        let e = entry("d3", "left 1 / b 1; x 2; x 2; x 2; d 1 / right 1", "");
        let budget = SearchBudget { nodes: 3, delta_slack: 0, turn_slack: 0 };
        let r = check_entry(&e, budget);
        assert_eq!(r.verdict, Verdict::Incomplete, "{r}");
    }

    #[test]
    fn parallel_order_is_stable() {
        let es: Vec<_> = (0..4)
            .map(|k| entry(&format!("e{k}"), &format!("left 1 / b 1; {}d 1 / right 1", "x 2; ".repeat(2 * k + 1)), ""))
            .collect();
        let one = check_all(&es, SearchBudget::default(), 1);
        let four = check_all(&es, SearchBudget::default(), 4);
        assert_eq!(one, four);
        assert!(one.iter().all(|r| r.verdict == Verdict::Pass));
    }
}
