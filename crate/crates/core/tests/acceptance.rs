//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are still evaluated exactly as
//! stated and print FAIL; the run only errors if one of them starts passing
//! (so the list stays honest) or if any other criterion fails.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use lcltrees::adversary::{
    builtin_solver, run_comp_adversary, run_hc_adversary, AdversaryOptions, AdversaryTranscript,
};
use lcltrees::classify::{
    decide_fullness, decide_greediness, good_lengths, is_l_full, DecideOptions,
    FullnessCertificate,
};
use lcltrees::homproblems::{build_h_delta, has_clique, hom_solve_h_delta, lcl_from_graph, SimpleGraph};
use lcltrees::io::serialize_graph;
use lcltrees::random::{random_bounded_graph, random_forest, random_forest_edges, random_tree, rng};
use lcltrees::solve::{greedy_color, toast_color};
use lcltrees::toast::{build_toast, verify_toast};
use lcltrees::{build_path, verify_coloring, verify_coloring_within, Error, Lcl};
use rand::Rng;
use sha2::{Digest, Sha256};

use common::*;

type Outcome = Result<String, String>;

const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "named_classifications",
    "the 5-cycle problem has bad length 3 (no closed odd walk of length 3), so its least l is 4",
)];

fn clique_equivalence() -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let mut check = |h: &SimpleGraph| {
        for delta in [2, 3] {
            let lcl = lcl_from_graph(h, delta).unwrap();
            let greedy = decide_greediness(&lcl, DecideOptions::default())
                .unwrap()
                .is_some();
            checked += 1;
            if greedy != has_clique(h, delta + 1) {
                mismatches.push(format!("{} delta={delta}", h.to_json()));
            }
        }
    };
    for n in 1..=5 {
        labeled_graphs(n).for_each(|h| check(&h));
    }
    graphs_up_to_iso(6).iter().for_each(&mut check);
    if mismatches.is_empty() {
        Ok(format!("{checked} (graph, delta) pairs, 0 mismatches"))
    } else {
        Err(format!("{} mismatches, first {}", mismatches.len(), mismatches[0]))
    }
}

fn fullness_vs_brute_force() -> Outcome {
    let corpus = corpus();
    let mut checks = 0u64;
    for (name, lcl) in &corpus {
        let horizon = 1usize << lcl.num_labels();
        for vp in subsets(lcl) {
            let quads = quadruples(&vp);
            for (a, alpha, b, beta) in &quads {
                let good = good_lengths(lcl, &vp, a, *alpha, b, *beta).unwrap();
                for len in 1..=10 {
                    checks += 1;
                    if good.contains(len) != path_extends(lcl, &vp, *alpha, *beta, len) {
                        return Err(format!("{name}: length {len} disagrees for {}", lcl.show(a)));
                    }
                }
            }
            for l in 1..=10 {
                checks += 1;
                let brute = quads.iter().all(|(_, alpha, _, beta)| {
                    (l..=l + horizon + 1).all(|len| path_extends(lcl, &vp, *alpha, *beta, len))
                });
                if is_l_full(lcl, &vp, l) != brute {
                    return Err(format!("{name}: l={l} disagrees on a subset of size {}", vp.len()));
                }
            }
        }
    }
    Ok(format!("{} problems, {checks} checks, 0 mismatches", corpus.len()))
}

fn named_classifications() -> Outcome {
    let opts = DecideOptions::default();
    let show = |c: &Option<FullnessCertificate>| match c {
        Some(c) => format!("full(|V'|={}, l={})", c.v_prime.len(), c.l),
        None => "not full".to_string(),
    };
    let mut lines = Vec::new();
    let mut ok = true;
    let mut expect = |name: &str, lcl: Lcl, full_l: Option<usize>, greedy: bool| {
        let f = decide_fullness(&lcl, opts).unwrap();
        let g = decide_greediness(&lcl, opts).unwrap();
        let full_ok = match (full_l, &f) {
            (Some(l), Some(c)) => c.l == l && c.v_prime == lcl.vertex_constraints(),
            (None, None) => true,
            _ => false,
        };
        let good = full_ok && g.is_some() == greedy;
        ok &= good;
        lines.push(format!(
            "{name}: {} {} ({})",
            show(&f),
            if g.is_some() { "greedy" } else { "not greedy" },
            if good { "as expected" } else { "UNEXPECTED" }
        ));
    };
    expect("K3 d2", k(3, 2), Some(2), true);
    expect("H2 d2", h2(), Some(3), false);
    expect("K2 d2", k(2, 2), None, false);
    expect("matching d2", perfect_matching(2), None, false);
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn toast_correctness() -> Outcome {
    let mut r = rng(4);
    for t in 0..100 {
        let n = r.gen_range(1..=500);
        let g = random_tree(40_000 + t, n, 3);
        for l in [1, 2, 4] {
            let toast = build_toast(&g, l, None).unwrap();
            let v = verify_toast(&g, l, &toast.pieces);
            if !v.ok() {
                return Err(format!("tree {t} (n={n}) l={l}: {:?}", &v.violations[..1]));
            }
        }
    }
    let g = build_path(2, 8);
    let got: Vec<Vec<u64>> = build_toast(&g, 2, None)
        .unwrap()
        .pieces
        .iter()
        .map(|p| p.vertices.iter().map(|v| v.0).collect())
        .collect();
    let want: Vec<Vec<u64>> = vec![vec![0, 1], (0..=3).collect(), (0..=6).collect(), (0..=8).collect()];
    if got != want {
        return Err(format!("path golden pieces {got:?}"));
    }
    Ok("300 toasts verified, path golden pieces reproduced".into())
}

fn solver_success() -> Outcome {
    let mut r = rng(5);
    for (name, lcl) in [("K3 d2", k(3, 2)), ("K3 d3", k(3, 3)), ("H2 d2", h2())] {
        let cert = decide_fullness(&lcl, DecideOptions::default())
            .unwrap()
            .ok_or(format!("{name} not certified full"))?;
        for t in 0..100 {
            let n = r.gen_range(1..=200);
            let g = random_forest(50_000 + t, n, lcl.delta());
            let c = toast_color(&g, &lcl, &cert, None).map_err(|e| format!("{name} forest {t}: {e}"))?;
            if !verify_coloring_within(&g, &lcl, &c, &cert.v_prime).ok() {
                return Err(format!("{name} forest {t}: invalid coloring"));
            }
        }
    }
    let mut cyclic = 0;
    for delta in [2, 3] {
        let lcl = k(delta + 1, delta);
        let cert = decide_greediness(&lcl, DecideOptions::default()).unwrap().unwrap();
        for t in 0..100 {
            let n = r.gen_range(1..=200);
            let g = random_bounded_graph(60_000 + t, n, delta);
            cyclic += usize::from(!g.is_forest());
            let c = greedy_color(&g, &lcl, &cert, None).map_err(|e| format!("greedy {t}: {e}"))?;
            if !verify_coloring(&g, &lcl, &c).ok() {
                return Err(format!("greedy K{} graph {t}: invalid coloring", delta + 1));
            }
        }
    }
    Ok(format!("300 toast runs and 200 greedy runs ({cyclic} cyclic) verified"))
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

fn golden_summary(t: &AdversaryTranscript) -> serde_json::Value {
    serde_json::json!({
        "outcome": t.outcome.kind(),
        "stages": t.stages.len(),
        "interesting": t.interesting_count(),
        "sha256": sha256_hex(&t.to_jsonl()),
    })
}

fn adversary_defeats() -> Outcome {
    let opts = AdversaryOptions {
        max_stages: 500,
        ..Default::default()
    };
    let k3 = k(3, 3);
    let k2 = k(2, 2);
    let runs: [(&str, &Lcl, bool); 2] = [("comp_k3_d3_lookahead1", &k3, true), ("hc_k2_d2_lookahead1", &k2, false)];
    let mut notes = Vec::new();
    for (name, lcl, comp) in runs {
        let play = |o: AdversaryOptions| {
            let s = builtin_solver("builtin:lookahead:1", lcl).unwrap();
            if comp {
                run_comp_adversary(lcl, s.as_ref(), o).unwrap()
            } else {
                run_hc_adversary(lcl, s.as_ref(), o).unwrap()
            }
        };
        let t = play(opts);
        let kind = t.outcome.kind();
        if kind != "VIOLATION" && kind != "DIVERGENCE" {
            return Err(format!("{name}: outcome {kind}"));
        }
        let breaches = t.check_invariants();
        if !breaches.is_empty() {
            return Err(format!("{name}: {}", breaches[0]));
        }
        let last = t.stages.last().unwrap().stage;
        for k in 1..=last {
            let prefix = play(AdversaryOptions {
                max_stages: k,
                ..opts
            });
            if prefix.stages[..] != t.stages[..=k]
                || serialize_graph(&prefix.final_graph()) != serialize_graph(&t.graph_at(k))
            {
                return Err(format!("{name}: replay of {k} stages differs"));
            }
        }
        let summary = golden_summary(&t);
        let path = golden_path(name);
        if std::env::var_os("LCLTREES_BLESS").is_some() {
            std::fs::write(&path, serde_json::to_string_pretty(&summary).unwrap() + "\n").unwrap();
        }
        let pinned: serde_json::Value = std::fs::read_to_string(&path)
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok())
            .ok_or(format!("{name}: golden file missing"))?;
        if pinned != summary {
            return Err(format!("{name}: transcript differs from golden {summary}"));
        }
        notes.push(format!("{name}: {kind} at stage {last}, {} interesting", t.interesting_count()));
    }
    Ok(notes.join("; "))
}

fn adversary_guards() -> Outcome {
    let s = builtin_solver("builtin:lookahead:1", &k(3, 2)).unwrap();
    let hc = run_hc_adversary(&k(3, 2), s.as_ref(), AdversaryOptions::default());
    let s = builtin_solver("builtin:lookahead:1", &k(4, 3)).unwrap();
    let comp = run_comp_adversary(&k(4, 3), s.as_ref(), AdversaryOptions::default());
    match (hc, comp) {
        (Err(Error::LclIsFull), Err(Error::LclIsGreedy)) => {
            Ok("hc refuses K3 d2, comp refuses K4 d3".into())
        }
        (a, b) => Err(format!("hc: {:?}, comp: {:?}", a.err(), b.err())),
    }
}

fn homomorphism_algorithm() -> Outcome {
    let mut r = rng(8);
    for delta in [2, 3, 4] {
        let h = build_h_delta(delta).unwrap();
        for t in 0..100 {
            let n = r.gen_range(0..=300);
            let edges = random_forest_edges(&mut r, n, delta, 0.1);
            let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
            let f = simple(n, &pairs);
            let m = hom_solve_h_delta(&f, delta).map_err(|e| format!("delta {delta} forest {t}: {e}"))?;
            if !m.is_homomorphism(&f, &h) {
                return Err(format!("delta {delta} forest {t}: not a homomorphism"));
            }
        }
    }
    for delta in 2..=5 {
        if has_clique(&build_h_delta(delta).unwrap(), delta + 1) {
            return Err(format!("H_{delta} has a {}-clique", delta + 1));
        }
    }
    Ok("300 forests mapped; H_2..H_5 clique-free".into())
}

fn greedy_implies_full() -> Outcome {
    let corpus = corpus();
    let mut greedy = 0;
    for (name, lcl) in &corpus {
        if decide_greediness(lcl, DecideOptions::default()).unwrap().is_some() {
            greedy += 1;
            if decide_fullness(lcl, DecideOptions::default()).unwrap().is_none() {
                return Err(format!("{name} is greedy but not full"));
            }
        }
    }
    Ok(format!("{greedy} greedy problems of {}, all full", corpus.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("clique_equivalence", clique_equivalence),
        ("fullness_vs_brute_force", fullness_vs_brute_force),
        ("named_classifications", named_classifications),
        ("toast_correctness", toast_correctness),
        ("solver_success", solver_success),
        ("adversary_defeats", adversary_defeats),
        ("adversary_guards", adversary_guards),
        ("homomorphism_algorithm", homomorphism_algorithm),
        ("greedy_implies_full", greedy_implies_full),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_UNATTAINABLE.iter().find(|(n, _)| *n == name);
        match (&result, known) {
            (Ok(d), None) => println!("PASS {name} [{secs:.1}s] {d}"),
            (Err(d), Some((_, why))) => println!("FAIL {name} [{secs:.1}s] {d} (known: {why})"),
            (Err(d), None) => {
                println!("FAIL {name} [{secs:.1}s] {d}");
                unexpected.push(name);
            }
            (Ok(d), Some(_)) => {
                println!("PASS {name} [{secs:.1}s] {d} (listed as unattainable; update the list)");
                unexpected.push(name);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results: {unexpected:?}");
        std::process::exit(1);
    }
}
