//! Text and JSON rendering of solve reports.

use serde::{Deserialize, Serialize};

use crate::epistemic::Semantics;
use crate::search::{SolveReport, SolveStats};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsJson {
    pub guesses_enumerated: u64,
    pub filtered_invalid: u64,
    pub pruned_by_consequences: u64,
    pub skipped_by_maximality: u64,
    pub reducts_solved: u64,
}

impl From<SolveStats> for StatsJson {
    fn from(s: SolveStats) -> Self {
        StatsJson {
            guesses_enumerated: s.guesses_enumerated,
            filtered_invalid: s.filtered_invalid,
            pruned_by_consequences: s.pruned_by_consequences,
            skipped_by_maximality: s.skipped_by_maximality,
            reducts_solved: s.reducts_solved,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldViewJson {
    pub guess: Vec<String>,
    pub belief_sets: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub semantics: Semantics,
    pub count: usize,
    pub world_views: Vec<WorldViewJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsJson>,
}

impl From<&SolveReport> for ReportJson {
    fn from(r: &SolveReport) -> Self {
        let world_views: Vec<WorldViewJson> = r
            .world_views
            .iter()
            .map(|w| WorldViewJson {
                guess: w.guess.describe(&r.negations),
                belief_sets: w.belief_sets.iter().map(|b| b.iter().map(ToString::to_string).collect()).collect(),
            })
            .collect();
        ReportJson { semantics: r.semantics, count: world_views.len(), world_views, stats: Some(r.stats.into()) }
    }
}

pub fn format_json(report: &SolveReport) -> String {
    serde_json::to_string_pretty(&ReportJson::from(report)).expect("report serializes")
}

/// One block per world view, one line per belief set.
pub fn format_text(report: &SolveReport) -> String {
    if report.world_views.is_empty() {
        return "no world views\n".to_string();
    }
    let mut out = String::new();
    for (i, w) in report.world_views.iter().enumerate() {
        out.push_str(&format!("World view {}:\n", i + 1));
        for b in &w.belief_sets {
            out.push_str(&format!("{b}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{solve_source, SolveOptions};

    fn report(text: &str, sem: Semantics) -> SolveReport {
        solve_source(text, sem, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn text_output() {
        let r = report("p :- M q, not q. q :- M p, not p. r :- M p, M q. :- K r.", Semantics::Es2016);
        assert_eq!(format_text(&r), "World view 1:\n{ }\n");

        let r = report("p | q. r :- M p. s | t :- K p. :- M p, M q.", Semantics::Es2016);
        assert_eq!(format_text(&r), "World view 1:\n{ q }\nWorld view 2:\n{ p r s }\n{ p r t }\n");

        let r = report("p | q. :- not K p.", Semantics::Es1994);
        assert_eq!(format_text(&r), "no world views\n");
    }

    #[test]
    fn json_output() {
        let r = report("p | q. r :- M q.", Semantics::Es2016);
        let v: serde_json::Value = serde_json::from_str(&format_json(&r)).unwrap();
        assert_eq!(v["semantics"], "es2016");
        assert_eq!(v["count"], 1);
        assert_eq!(v["world_views"][0]["guess"], serde_json::json!(["NOT not q"]));
        assert_eq!(v["world_views"][0]["belief_sets"], serde_json::json!([["p", "r"], ["q", "r"]]));
        assert!(v["stats"]["guesses_enumerated"].is_u64());

        let r = report("p | q. :- not K p.", Semantics::Es1994);
        let v: serde_json::Value = serde_json::from_str(&format_json(&r)).unwrap();
        assert_eq!(v["count"], 0);
        assert_eq!(v["world_views"], serde_json::json!([]));
    }

    #[test]
    fn json_key_order_is_stable() {
        let json = format_json(&report("p.", Semantics::Es2016));
        let keys = ["\"semantics\"", "\"count\"", "\"world_views\"", "\"stats\""];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn json_round_trip() {
        let r = report("p | q. r :- M p. s | t :- K p. :- M p, M q.", Semantics::Es2016);
        let parsed: ReportJson = serde_json::from_str(&format_json(&r)).unwrap();
        assert_eq!(parsed, ReportJson::from(&r));
    }
}
