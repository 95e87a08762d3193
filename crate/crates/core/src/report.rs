//! Machine-readable reports for block scans and verification suites, plus
//! the driver functions shared by the command-line interface and the
//! acceptance tests.
//!
//! Reports are deterministic given identical configuration, except for the
//! elapsed_ms timing fields.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::blocks::{block_idempotents, source_data, splitting_field, GroupAlgebra};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{make_group, sylow, Elt, FiniteGroup, Subgroup};
use crate::hochschild::{verify_delta_conj_square, verify_mackey_axioms};
use crate::sasaki::{
    block_pair, correspondent_pair, verify_hh_square, verify_reciprocity, verify_transitivity,
    SasakiContext,
};

/// Groups shipped as the default scan catalog.
pub const DEFAULT_CATALOG: [&str; 10] = [
    "C 2",
    "C 3",
    "C 4",
    "prod(C 2,C 2)",
    "S 3",
    "D 8",
    "Q8",
    "A 4",
    "D 12",
    "S 4",
];

pub const DEFAULT_PRIMES: [u32; 2] = [2, 3];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct YEntryJson {
    pub rep: String,
    pub multiplicity: usize,
    pub coset_size: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegreeJson {
    pub n: usize,
    pub dim_image: usize,
    pub dim_stable: usize,
    pub dim_invariant: usize,
    pub equal: bool,
    pub image_in_stable: bool,
    pub image_in_invariant: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteJson {
    pub passed: bool,
    pub items: Vec<ItemJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ItemJson {
    pub name: String,
    pub pass: bool,
}

/// One record per (group, prime, block).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BlockReport {
    pub group: String,
    pub prime: u32,
    pub field: String,
    pub block_index: usize,
    pub defect_order: usize,
    pub y_multiset: Vec<YEntryJson>,
    /// the deterministic source-idempotent choice, as coeff*element terms
    pub source_idempotent: Vec<String>,
    pub degrees: Vec<DegreeJson>,
    pub classification: String,
    /// degree at which the matrix budget stopped the scan, when any
    pub budget_capped_at: Option<usize>,
    pub suites: BTreeMap<String, SuiteJson>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScanReport {
    pub records: Vec<BlockReport>,
    /// names of hard assertions that failed, empty on success
    pub hard_failures: Vec<String>,
    pub elapsed_ms: u64,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Copy with timing fields zeroed, for byte-for-byte comparisons.
    pub fn normalized(&self) -> ScanReport {
        let mut out = self.clone();
        out.elapsed_ms = 0;
        for r in out.records.iter_mut() {
            r.elapsed_ms = 0;
        }
        out
    }
}

/// Which suites to run during a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Blocks,
    Mackey,
    Sasaki,
    Transfer,
    HhSquare,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        match s {
            "blocks" => Ok(Suite::Blocks),
            "mackey" => Ok(Suite::Mackey),
            "sasaki" => Ok(Suite::Sasaki),
            "transfer" => Ok(Suite::Transfer),
            "hh-square" => Ok(Suite::HhSquare),
            _ => Err(Error::Usage(format!(
                "unknown suite `{s}` (expected blocks|mackey|sasaki|transfer|hh-square)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub groups: Vec<String>,
    pub primes: Vec<u32>,
    pub max_degree: usize,
    pub hh_degree: usize,
    pub suites: Vec<Suite>,
    pub budget: Budget,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            groups: DEFAULT_CATALOG.iter().map(|s| s.to_string()).collect(),
            primes: DEFAULT_PRIMES.to_vec(),
            max_degree: 4,
            hh_degree: 1,
            suites: vec![Suite::Sasaki],
            budget: Budget::from_env(),
        }
    }
}

/// Run the configured suites over every (group, prime, block) triple.
pub fn run_scan(config: &ScanConfig) -> Result<ScanReport> {
    if config.suites.is_empty() {
        return Err(Error::Usage("at least one suite must be selected".into()));
    }
    let scan_start = Instant::now();
    let mut records = Vec::new();
    let mut hard_failures = Vec::new();
    for spec in &config.groups {
        let group = make_group(spec)?;
        for &p in &config.primes {
            let sub_records = scan_group(spec, &group, p, config, &mut hard_failures)?;
            records.extend(sub_records);
        }
    }
    Ok(ScanReport {
        records,
        hard_failures,
        elapsed_ms: scan_start.elapsed().as_millis() as u64,
    })
}

fn scan_group(
    spec: &str,
    group: &Arc<FiniteGroup>,
    p: u32,
    config: &ScanConfig,
    hard_failures: &mut Vec<String>,
) -> Result<Vec<BlockReport>> {
    let field = splitting_field(group, p)?;
    let ga = GroupAlgebra::new(group, &field);
    let blocks = block_idempotents(group, &field)?;
    let mut out = Vec::new();
    for block in &blocks {
        let start = Instant::now();
        let tag = format!("{spec} p={p} block {}", block.index);
        let sd = source_data(&ga, block)?;
        let mut ctx = SasakiContext::new(sd, config.budget);
        let source_idempotent: Vec<String> = ctx
            .sd
            .i
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(e, &c)| format!("{}*{}", c, group.name(e as crate::group::Elt)))
            .collect();
        let y_multiset: Vec<YEntryJson> = ctx
            .sd
            .y
            .iter()
            .map(|e| YEntryJson {
                rep: group.name(e.rep).to_string(),
                multiplicity: e.multiplicity,
                coset_size: e.coset_size,
            })
            .collect();
        let mut degrees = Vec::new();
        let mut suites = BTreeMap::new();
        let mut budget_capped_at = None;

        let classification;
        if config.suites.contains(&Suite::Sasaki) {
            let outcome = ctx.conjecture_check(config.max_degree)?;
            classification = outcome.classification.clone();
            budget_capped_at = outcome.capped_at;
            for d in &outcome.degrees {
                degrees.push(DegreeJson {
                    n: d.n,
                    dim_image: d.dim_image,
                    dim_stable: d.dim_stable,
                    dim_invariant: d.dim_invariant,
                    equal: d.equal,
                    image_in_stable: d.image_in_stable,
                    image_in_invariant: d.image_in_invariant,
                });
                // hard assertions
                if !d.image_in_stable {
                    hard_failures.push(format!("{tag}: image not stable at degree {}", d.n));
                }
                if !d.image_in_invariant {
                    hard_failures.push(format!("{tag}: image not invariant at degree {}", d.n));
                }
                if outcome.guaranteed && !d.equal {
                    hard_failures.push(format!(
                        "{tag}: guaranteed equality fails at degree {}",
                        d.n
                    ));
                }
                if !d.merge_consistent {
                    hard_failures.push(format!(
                        "{tag}: merged double-coset maps disagree at degree {}",
                        d.n
                    ));
                }
            }
        } else {
            let (label, _) = ctx.classification()?;
            classification = label;
        }

        if config.suites.contains(&Suite::Mackey) && block.principal {
            let (k_sub, h_sub, conj) = default_mackey_tuple(group, p);
            let mut items = Vec::new();
            for n in 0..=config.hh_degree {
                let report =
                    verify_mackey_axioms(group, &field, &k_sub, &h_sub, conj, n, &config.budget)?;
                for (name, ok) in report.items {
                    if !ok {
                        hard_failures.push(format!("{tag}: {name} fails at degree {n}"));
                    }
                    items.push(ItemJson {
                        name: format!("{name}-deg-{n}"),
                        pass: ok,
                    });
                }
            }
            let passed = items.iter().all(|i| i.pass);
            suites.insert("mackey".into(), SuiteJson { passed, items });
        }

        if config.suites.contains(&Suite::Transfer) {
            match correspondent_pair(&mut ctx) {
                Ok(mut pair) => {
                    let mut items = Vec::new();
                    let rec = verify_reciprocity(&mut ctx, &mut pair, config.max_degree.min(3))?;
                    let tra = verify_transitivity(&mut ctx, &mut pair, config.max_degree.min(3))?;
                    for (name, ok) in rec.items.into_iter().chain(tra.items) {
                        if !ok {
                            hard_failures.push(format!("{tag}: {name}"));
                        }
                        items.push(ItemJson { name, pass: ok });
                    }
                    let passed = items.iter().all(|i| i.pass);
                    suites.insert("transfer".into(), SuiteJson { passed, items });
                }
                Err(Error::Precondition(msg)) => {
                    suites.insert(
                        "transfer".into(),
                        SuiteJson {
                            passed: true,
                            items: vec![ItemJson {
                                name: format!("skipped: {msg}"),
                                pass: true,
                            }],
                        },
                    );
                }
                Err(e) => return Err(e),
            }
        }

        if config.suites.contains(&Suite::HhSquare) {
            let mut pair = correspondent_pair(&mut ctx)?;
            let rep = verify_hh_square(&mut ctx, &mut pair, config.hh_degree)?;
            let mut items = Vec::new();
            for (name, ok) in rep.items {
                if !ok {
                    hard_failures.push(format!("{tag}: hh {name}"));
                }
                items.push(ItemJson { name, pass: ok });
            }
            let passed = items.iter().all(|i| i.pass);
            suites.insert("hh-square".into(), SuiteJson { passed, items });
        }

        out.push(BlockReport {
            group: spec.to_string(),
            prime: p,
            field: format!("GF({}^{})", field.characteristic(), field.degree()),
            block_index: block.index,
            defect_order: block.defect_order(),
            y_multiset,
            source_idempotent,
            degrees,
            classification,
            budget_capped_at,
            suites,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(out)
}

/// Deterministic default tuple for the Mackey suite on a group: the Sylow
/// p-subgroup, the Sylow subgroup at the least other prime divisor, and the
/// least conjugator outside the second subgroup.
pub fn default_mackey_tuple(group: &Arc<FiniteGroup>, p: u32) -> (Subgroup, Subgroup, Elt) {
    let k_sub = sylow(group, p as usize);
    let other = smallest_other_prime(group.order(), p);
    let h_sub = match other {
        Some(q) => sylow(group, q as usize),
        None => group.full_subgroup(),
    };
    let conj = (0..group.order() as Elt)
        .find(|&x| !h_sub.contains(x))
        .unwrap_or(0);
    (k_sub, h_sub, conj)
}

fn smallest_other_prime(mut n: usize, p: u32) -> Option<u32> {
    let mut d = 2;
    while n > 1 {
        if n.is_multiple_of(d) {
            if d as u32 != p {
                return Some(d as u32);
            }
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    None
}

// ---------------------------------------------------------------------------
// Named verification drivers (cmd_verify)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub group: String,
    pub prime: u32,
    pub items: Vec<ItemJson>,
    pub passed: bool,
    pub elapsed_ms: u64,
}

/// Run one named verifier over a (group, prime) pair. The optional
/// `subgroup` permutation spec selects H for the transfer-law suites (the
/// normalizer pair is used when absent).
pub fn run_verify(
    suite: &str,
    group_spec: &str,
    p: u32,
    max_degree: usize,
    hh_degree: usize,
    subgroup: Option<&str>,
    budget: Budget,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let group = make_group(group_spec)?;
    let field = splitting_field(&group, p)?;
    let mut items: Vec<ItemJson> = Vec::new();
    match suite {
        "mackey" => {
            let (k_sub, h_sub, conj) = default_mackey_tuple(&group, p);
            for n in 0..=hh_degree {
                let report =
                    verify_mackey_axioms(&group, &field, &k_sub, &h_sub, conj, n, &budget)?;
                for (name, ok) in report.items {
                    items.push(ItemJson {
                        name: format!("{name}-deg-{n}"),
                        pass: ok,
                    });
                }
            }
        }
        "delta-square" => {
            // conjugation square for the Sylow subgroup and conjugators from
            // distinct classes outside it
            let h_sub = sylow(&group, p as usize);
            let conjugators: Vec<Elt> = class_probe_elements(&group, &h_sub);
            for n in 0..=max_degree.min(2) {
                for &g in &conjugators {
                    let ok = verify_delta_conj_square(&group, &field, &h_sub, g, n, &budget)?;
                    items.push(ItemJson {
                        name: format!("square-g-{}-deg-{n}", group.name(g)),
                        pass: ok,
                    });
                }
            }
        }
        "reciprocity" | "transitivity" => {
            let ga = GroupAlgebra::new(&group, &field);
            let blocks = block_idempotents(&group, &field)?;
            for block in &blocks {
                let sd = source_data(&ga, block)?;
                let mut ctx = SasakiContext::new(sd, budget);
                let pair_result = match subgroup {
                    Some(sub_spec) => subgroup_pair(&mut ctx, sub_spec),
                    None => correspondent_pair(&mut ctx),
                };
                let mut pair = match pair_result {
                    Ok(p) => p,
                    Err(Error::Precondition(msg)) => {
                        items.push(ItemJson {
                            name: format!("block-{}-skipped: {msg}", block.index),
                            pass: true,
                        });
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let report = if suite == "reciprocity" {
                    verify_reciprocity(&mut ctx, &mut pair, max_degree)?
                } else {
                    verify_transitivity(&mut ctx, &mut pair, max_degree)?
                };
                for (name, ok) in report.items {
                    items.push(ItemJson {
                        name: format!("block-{}-{name}", block.index),
                        pass: ok,
                    });
                }
            }
        }
        "hh-square" => {
            let ga = GroupAlgebra::new(&group, &field);
            let blocks = block_idempotents(&group, &field)?;
            for block in &blocks {
                let sd = source_data(&ga, block)?;
                let mut ctx = SasakiContext::new(sd, budget);
                let mut pair = correspondent_pair(&mut ctx)?;
                let report = verify_hh_square(&mut ctx, &mut pair, hh_degree)?;
                for (name, ok) in report.items {
                    items.push(ItemJson {
                        name: format!("block-{}-{name}", block.index),
                        pass: ok,
                    });
                }
            }
        }
        _ => {
            return Err(Error::Usage(format!(
                "unknown suite `{suite}` (expected mackey|delta-square|reciprocity|transitivity|hh-square)"
            )))
        }
    }
    let passed = items.iter().all(|i| i.pass);
    Ok(VerifyReport {
        suite: suite.to_string(),
        group: group_spec.to_string(),
        prime: p,
        items,
        passed,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Pair context for an explicitly chosen subgroup: its principal block.
fn subgroup_pair(ctx: &mut SasakiContext, sub_spec: &str) -> Result<crate::sasaki::BlockPair> {
    let group = ctx.group().clone();
    // the argument is a comma list of element names in the parent group; we
    // build the subgroup they generate, e.g. "(12),(123)"
    let gens: Vec<Elt> = sub_spec
        .split(',')
        .map(|name| {
            let name = name.trim();
            (0..group.order() as Elt)
                .find(|&e| group.name(e) == name)
                .ok_or_else(|| Error::Usage(format!("unknown element `{name}`")))
        })
        .collect::<Result<_>>()?;
    let h_sub = group.closure(&gens);
    let field = ctx.field().clone();
    let view = h_sub.as_group();
    let blocks = block_idempotents(&view.group, &field)?;
    let principal = blocks
        .iter()
        .position(|b| b.principal)
        .expect("a principal block always exists");
    block_pair(ctx, &h_sub, principal)
}

/// A few deterministic conjugators hitting distinct classes outside H.
fn class_probe_elements(group: &Arc<FiniteGroup>, h_sub: &Subgroup) -> Vec<Elt> {
    let mut out = vec![0 as Elt];
    for class in group.conjugacy_classes() {
        if out.len() >= 4 {
            break;
        }
        let rep = class[0];
        if rep != 0 && !h_sub.contains(rep) {
            out.push(rep);
        }
    }
    out
}

/// Text summary for the block-info command.
pub fn block_info_text(group_spec: &str, p: u32) -> Result<String> {
    use std::fmt::Write as _;
    let group = make_group(group_spec)?;
    let field = splitting_field(&group, p)?;
    let ga = GroupAlgebra::new(&group, &field);
    let blocks = block_idempotents(&group, &field)?;
    let mut out = String::new();
    writeln!(
        out,
        "{} at p = {p} over GF({}^{}): {} block(s)",
        group_spec,
        field.characteristic(),
        field.degree(),
        blocks.len()
    )
    .unwrap();
    for block in &blocks {
        let sd = source_data(&ga, block)?;
        writeln!(
            out,
            "block {}{}: defect order {}",
            block.index,
            if block.principal { " (principal)" } else { "" },
            block.defect_order()
        )
        .unwrap();
        let support: Vec<String> =
            sd.i.iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(e, &c)| format!("{}*{}", c, group.name(e as Elt)))
                .collect();
        writeln!(out, "  source idempotent i = {}", support.join(" + ")).unwrap();
        writeln!(out, "  dim i kG i = {}", sd.dim_source_algebra()).unwrap();
        for e in &sd.y {
            writeln!(
                out,
                "  Y entry: rep {} multiplicity {} |PgP| = {}",
                group.name(e.rep),
                e.multiplicity,
                e.coset_size
            )
            .unwrap();
        }
        let ctx = SasakiContext::new(sd, Budget::from_env());
        let reps = ctx.stabilizer_coset_reps();
        let rep_names: Vec<&str> = reps.iter().map(|&e| group.name(e)).collect();
        writeln!(
            out,
            "  N_G(P, e_P) / P C_G(P) representatives: {}",
            rep_names.join(", ")
        )
        .unwrap();
        writeln!(
            out,
            "  fusion system: {} subgroups, {} morphisms",
            ctx.sd.fusion.subgroups.len(),
            ctx.sd.fusion.morphism_count()
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_s3_p3_sasaki() {
        let config = ScanConfig {
            groups: vec!["S 3".into()],
            primes: vec![3],
            max_degree: 4,
            hh_degree: 1,
            suites: vec![Suite::Sasaki],
            budget: Budget::default(),
        };
        let report = run_scan(&config).unwrap();
        assert!(
            report.hard_failures.is_empty(),
            "{:?}",
            report.hard_failures
        );
        assert_eq!(report.records.len(), 1);
        let rec = &report.records[0];
        assert_eq!(rec.field, "GF(3^1)");
        assert_eq!(rec.defect_order, 3);
        let dims: Vec<usize> = rec.degrees.iter().map(|d| d.dim_image).collect();
        assert_eq!(dims, vec![1, 0, 0, 1, 1]);
        assert!(rec.degrees.iter().all(|d| d.equal));
    }

    #[test]
    fn scan_reports_are_deterministic() {
        let config = ScanConfig {
            groups: vec!["S 3".into(), "A 4".into()],
            primes: vec![2],
            max_degree: 2,
            hh_degree: 1,
            suites: vec![Suite::Sasaki],
            budget: Budget::default(),
        };
        let a = run_scan(&config).unwrap().normalized();
        let b = run_scan(&config).unwrap().normalized();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn verify_mackey_cli_path() {
        let report = run_verify("mackey", "S 3", 3, 2, 1, None, Budget::default()).unwrap();
        assert!(report.passed, "{:?}", report.items);
    }

    #[test]
    fn verify_delta_square_cli_path() {
        let report = run_verify("delta-square", "S 3", 3, 2, 1, None, Budget::default()).unwrap();
        assert!(report.passed, "{:?}", report.items);
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        match run_verify("nope", "S 3", 3, 2, 1, None, Budget::default()) {
            Err(Error::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn block_info_s3() {
        let text = block_info_text("S 3", 3).unwrap();
        assert!(text.contains("1 block(s)"));
        assert!(text.contains("dim i kG i = 6"));
        let text2 = block_info_text("S 3", 2).unwrap();
        assert!(text2.contains("2 block(s)"));
    }
}
