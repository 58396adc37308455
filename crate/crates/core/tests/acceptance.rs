//! Acceptance checks. Prints one `[PASS]`, `[FAIL]` or `[SKIP]` line per
//! criterion and exits non-zero if any criterion fails.
//!
//! Criterion 8 runs only when `SENSEFORGE_SEMEVAL_DIR` names a directory
//! holding `run.toml` (a pipeline config) and `gold.tsv`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use senseforge::clustering::{
    crp_cluster, kmeans_adaptive, personalized_pagerank, reduce_small_clusters, Cluster, CrpParams,
    PageRankConfig, SenseGraph,
};
use senseforge::eval::{
    confusion_matrix, paired_f1, rho, v_score, AlignedTriple, LabeledInstances,
};
use senseforge::pipeline::{cmd_build, cmd_eval_wsi, cmd_label, Method, PipelineConfig, WsiInputs};
use senseforge::sense_select::{
    att_weights, avg_weights, grad_check, AttentionParams, AvgNorm, LinearLoss, SquaredNorm,
};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn labels(k: usize) -> Vec<String> {
    (0..k).map(|j| format!("w.noun.{j}")).collect()
}

fn as_instances(pred: &[usize], gold: &[usize]) -> LabeledInstances {
    LabeledInstances::from_labels(
        pred.iter().map(|x| format!("p{x}")).collect(),
        gold.iter().map(|x| format!("g{x}")).collect(),
    )
    .expect("equal lengths")
}

/// Objective sequence is non-increasing up to float rounding.
fn monotone(objective: &[f64]) -> bool {
    objective
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0))
}

// ---------------------------------------------------------------------------
// Synthetic planted-sense data

const DIM: usize = 10;
const PER_CLUSTER: usize = 50;
const SIGMA: f64 = 1.0;
const MIN_SEPARATION: f64 = 4.0 * SIGMA;

struct Planted {
    contexts: Vec<Vec<f64>>,
    truth: Vec<usize>,
    means: Vec<Vec<f64>>,
}

/// `k` isotropic Gaussians whose means are pairwise at least
/// `MIN_SEPARATION` apart, drawn by rejection from a cube.
fn planted(k: usize, rng: &mut ChaCha8Rng) -> Planted {
    let noise = Normal::new(0.0, SIGMA).unwrap();
    let mut means: Vec<Vec<f64>> = Vec::with_capacity(k);
    while means.len() < k {
        let m: Vec<f64> = (0..DIM).map(|_| rng.random_range(-3.0..3.0)).collect();
        if means
            .iter()
            .all(|o| senseforge::vector::squared_distance(o, &m).sqrt() >= MIN_SEPARATION)
        {
            means.push(m);
        }
    }
    let mut rows: Vec<(Vec<f64>, usize)> = Vec::with_capacity(k * PER_CLUSTER);
    for (j, m) in means.iter().enumerate() {
        for _ in 0..PER_CLUSTER {
            rows.push((m.iter().map(|x| x + noise.sample(rng)).collect(), j));
        }
    }
    rows.shuffle(rng);
    let (contexts, truth) = rows.into_iter().unzip();
    Planted {
        contexts,
        truth,
        means,
    }
}

struct SyntheticRun {
    f1: Vec<f64>,
    count_matches: usize,
    monotonicity_violations: usize,
    elapsed: Duration,
}

const TRIALS: u64 = 100;

fn synthetic_suite() -> SyntheticRun {
    let start = Instant::now();
    let perturb = Normal::new(0.0, 0.3 * SIGMA).unwrap();
    let mut run = SyntheticRun {
        f1: Vec::new(),
        count_matches: 0,
        monotonicity_violations: 0,
        elapsed: Duration::ZERO,
    };
    for trial in 0..TRIALS {
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let k = 2 + (trial % 3) as usize;
        let data = planted(k, &mut rng);
        let init: Vec<Vec<f64>> = data
            .means
            .iter()
            .map(|m| m.iter().map(|x| x + perturb.sample(&mut rng)).collect())
            .collect();
        let fit = kmeans_adaptive(&data.contexts, &init, &labels(k), 10, 300).unwrap();
        run.f1
            .push(paired_f1(&as_instances(&fit.assignments, &data.truth)).f1);
        run.count_matches += usize::from(fit.clusters.len() == k);
        if !monotone(&fit.objective) {
            run.monotonicity_violations += 1;
        }
    }
    run.elapsed = start.elapsed();
    run
}

fn criterion_1(run: &SyntheticRun) -> Outcome {
    let mean = run.f1.iter().sum::<f64>() / run.f1.len() as f64;
    let min = run.f1.iter().cloned().fold(f64::INFINITY, f64::min);
    let below = run.f1.iter().filter(|&&f| f < 0.95).count();
    let rate = run.count_matches as f64 / TRIALS as f64;
    verdict(
        below == 0 && rate >= 0.90 && run.elapsed < Duration::from_secs(10),
        format!(
            "paired F1 mean {mean:.4}, min {min:.4} ({below} trials < 0.95); \
             cluster count matched in {}/{TRIALS}; {:.2?}",
            run.count_matches, run.elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let instances = 500;
    for case in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + case);
        let n = rng.random_range(1..=150);
        let k = rng.random_range(1..=8);
        let dim = rng.random_range(1..=6);
        let contexts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let init: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let fit = kmeans_adaptive(&contexts, &init, &labels(k), 10, 100).unwrap();
        check_partition(case, n, &fit.clusters, &fit.assignments, &mut failures);

        // The absorption step on its own, with arbitrary (non-Lloyd) inputs.
        let assignments: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let mut counts = vec![0; k];
        assignments.iter().for_each(|&a| counts[a] += 1);
        let clusters: Vec<Cluster> = init
            .iter()
            .zip(counts)
            .zip(labels(k))
            .map(|((c, count), label)| Cluster {
                label,
                count,
                centroid: c.clone(),
                sense: None,
            })
            .collect();
        let (kept, remapped) = reduce_small_clusters(&clusters, 10, &contexts, &assignments);
        check_partition(case, n, &kept, &remapped, &mut failures);
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} randomized inputs, {} violations{}",
            2 * instances,
            failures.len(),
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

fn check_partition(
    case: u64,
    n: usize,
    clusters: &[Cluster],
    assignments: &[usize],
    failures: &mut Vec<String>,
) {
    let total: usize = clusters.iter().map(|c| c.count).sum();
    let mut tally = vec![0; clusters.len()];
    for &a in assignments {
        if a >= clusters.len() {
            failures.push(format!("case {case}: assignment {a} out of range"));
            return;
        }
        tally[a] += 1;
    }
    let counts: Vec<usize> = clusters.iter().map(|c| c.count).collect();
    if total != n || assignments.len() != n || tally != counts {
        failures.push(format!(
            "case {case}: {n} tokens, counts {counts:?}, tally {tally:?}"
        ));
    }
    if clusters.len() != 1 && counts.iter().any(|&c| c < 10) {
        failures.push(format!("case {case}: small cluster survives in {counts:?}"));
    }
}

fn criterion_3(run: &SyntheticRun) -> Outcome {
    // Randomized starts from arbitrary centroids, on top of the planted suite.
    let mut violations = run.monotonicity_violations;
    let mut fits = TRIALS as usize;
    for case in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + case);
        let k = rng.random_range(1..=6);
        let data = planted(rng.random_range(1..=4), &mut rng);
        let init: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..DIM).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let fit = kmeans_adaptive(&data.contexts, &init, &labels(k), 10, 300).unwrap();
        violations += usize::from(!monotone(&fit.objective));
        fits += 1;
    }
    verdict(
        violations == 0,
        format!("{fits} fits, {violations} with an objective increase"),
    )
}

fn criterion_4() -> Outcome {
    let defs = [vec![1.0, 0.0], vec![0.0, 1.0]];
    let ctx = [vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let fit = crp_cluster(
        &ctx,
        &defs,
        &labels(2),
        CrpParams::new(0.5, 0.5, 1.0).unwrap(),
    )
    .unwrap();
    let counts: Vec<usize> = fit.clusters.iter().map(|c| c.count).collect();
    let trace_ok = fit.seats == [0, 0, 1] && counts == [2, 1];

    let mut changed = 0;
    for case in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + case);
        let dim = rng.random_range(2..=8);
        let k = rng.random_range(1..=5);
        let n = rng.random_range(1..=40);
        let mut vecs = |m: usize| -> Vec<Vec<f64>> {
            (0..m)
                .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect()
        };
        let (seeds, contexts) = (vecs(k), vecs(n));
        let params = CrpParams::new(
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..2.0),
            rng.random_range(0.01..2.0),
        )
        .unwrap();
        let factor = rng.random_range(0.01..100.0);
        let a = crp_cluster(&contexts, &seeds, &labels(k), params).unwrap();
        let b = crp_cluster(&contexts, &seeds, &labels(k), params.scaled(factor)).unwrap();
        changed += usize::from(a.seats != b.seats);
    }
    verdict(
        trace_ok && changed == 0,
        format!(
            "hand trace seats {:?} counts {counts:?}; {changed}/100 scaled instances changed seating",
            fit.seats
        ),
    )
}

/// Dense power iteration on the explicit transition matrix, run until the
/// iterate stops changing in the last bits.
fn dense_pagerank(adj: &[Vec<f64>], teleport: &[f64], damping: f64) -> Vec<f64> {
    let n = adj.len();
    let total: f64 = teleport.iter().sum();
    let t: Vec<f64> = teleport.iter().map(|x| x / total).collect();
    // m[j][i]: probability of stepping i -> j; dangling columns teleport.
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        let out: f64 = adj[i].iter().sum();
        for j in 0..n {
            m[j][i] = if out > 0.0 { adj[i][j] / out } else { t[j] };
        }
    }
    let mut p = t.clone();
    for _ in 0..20_000 {
        let next: Vec<f64> = (0..n)
            .map(|j| (1.0 - damping) * t[j] + damping * (0..n).map(|i| m[j][i] * p[i]).sum::<f64>())
            .collect();
        let delta: f64 = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if delta < 1e-16 {
            break;
        }
    }
    p
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let graphs = 300;
    for case in 0..graphs {
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + case);
        let n = rng.random_range(1..=20);
        let density = rng.random_range(0.0..0.6);
        let nodes: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let config = PageRankConfig {
            damping: rng.random_range(0.5..0.95),
            ..PageRankConfig::default()
        };
        let mut graph = SenseGraph::new(nodes.clone(), config).unwrap();
        let mut adj = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                if rng.random_bool(density) {
                    let w = rng.random_range(0.1..3.0);
                    graph.set_edge(&nodes[i], &nodes[j], w).unwrap();
                    adj[i][j] = w;
                    adj[j][i] = w;
                }
            }
        }
        let mut teleport: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    rng.random_range(0.0..1.0)
                } else {
                    0.0
                }
            })
            .collect();
        teleport[rng.random_range(0..n)] = 1.0;

        let p = personalized_pagerank(&graph, &teleport).unwrap();
        let q = dense_pagerank(&adj, &teleport, config.damping);
        let linf = p
            .iter()
            .zip(&q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(linf);
        worst_sum = worst_sum.max((p.iter().sum::<f64>() - 1.0).abs());
    }
    verdict(
        worst <= 1e-8 && worst_sum <= 1e-9,
        format!("{graphs} graphs; max L-inf error {worst:.2e}, max |sum - 1| {worst_sum:.2e}"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31_000);

    let mut worst_sum: f64 = 0.0;
    let mut worst_shift: f64 = 0.0;
    for _ in 0..2000 {
        let k = rng.random_range(1..=8);
        let scale = [1.0, 10.0, 300.0][rng.random_range(0..3)];
        let scores: Vec<f64> = (0..k).map(|_| rng.random_range(-scale..scale)).collect();
        let w = att_weights(&scores);
        worst_sum = worst_sum.max((w.sum() - 1.0).abs());
        let c = rng.random_range(-50.0..50.0);
        let shifted: Vec<f64> = scores.iter().map(|s| s + c).collect();
        let ws = att_weights(&shifted);
        for (a, b) in w.weights.iter().zip(&ws.weights) {
            worst_shift = worst_shift.max((a - b).abs());
        }
        let distances: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0)).collect();
        let lw = avg_weights(&distances, AvgNorm::Logistic).unwrap();
        worst_sum = worst_sum.max((lw.sum() - 1.0).abs());
    }

    let mut worst_grad: f64 = 0.0;
    let mut checks = 0;
    for case in 0..100 {
        let k = rng.random_range(1..=5);
        let dc = rng.random_range(1..=8);
        let ds = rng.random_range(1..=8);
        let width = rng.random_range(1..=8);
        let u: Vec<f64> = (0..dc).map(|_| rng.random_range(-1.0..1.0)).collect();
        let senses: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..ds).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let direction: Vec<f64> = (0..ds).map(|_| rng.random_range(-1.0..1.0)).collect();
        for params in [
            AttentionParams::random_tanh(dc, ds, width, 1.0, &mut rng),
            AttentionParams::random_bilinear(dc, ds, 1.0, &mut rng),
        ] {
            let report = if case % 2 == 0 {
                grad_check(&params, &u, &senses, &SquaredNorm)
            } else {
                grad_check(&params, &u, &senses, &LinearLoss(direction.clone()))
            }
            .unwrap();
            worst_grad = worst_grad.max(report.max_rel_error);
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst_sum <= 1e-12
            && worst_shift <= 1e-12
            && worst_grad < 1e-5
            && elapsed < Duration::from_secs(5),
        format!(
            "max |sum - 1| {worst_sum:.1e}, max shift change {worst_shift:.1e}, \
             {checks} gradient checks with max relative error {worst_grad:.1e}; {elapsed:.2?}"
        ),
    )
}

/// V-measure straight from the entropy definitions, counting by scanning.
fn brute_v(pred: &[usize], gold: &[usize]) -> f64 {
    let n = pred.len() as f64;
    let ps: BTreeSet<usize> = pred.iter().copied().collect();
    let gs: BTreeSet<usize> = gold.iter().copied().collect();
    let count = |f: &dyn Fn(usize) -> bool| (0..pred.len()).filter(|&i| f(i)).count() as f64;
    let h = |labels: &BTreeSet<usize>, of: &[usize]| -> f64 {
        labels
            .iter()
            .map(|&l| {
                let p = count(&|i| of[i] == l) / n;
                -p * p.ln()
            })
            .sum()
    };
    let cond = |a: &[usize], a_set: &BTreeSet<usize>, b: &[usize], b_set: &BTreeSet<usize>| {
        // H(A | B)
        let mut acc = 0.0;
        for &y in b_set {
            let ny = count(&|i| b[i] == y);
            for &x in a_set {
                let nxy = count(&|i| a[i] == x && b[i] == y);
                if nxy > 0.0 {
                    acc -= nxy / n * (nxy / ny).ln();
                }
            }
        }
        acc
    };
    let (hg, hp) = (h(&gs, gold), h(&ps, pred));
    let hom = if hg == 0.0 {
        1.0
    } else {
        1.0 - cond(gold, &gs, pred, &ps) / hg
    };
    let com = if hp == 0.0 {
        1.0
    } else {
        1.0 - cond(pred, &ps, gold, &gs) / hp
    };
    if hom + com == 0.0 {
        0.0
    } else {
        2.0 * hom * com / (hom + com)
    }
}

fn brute_f1(pred: &[usize], gold: &[usize]) -> f64 {
    let (mut both, mut sp, mut sg) = (0u32, 0u32, 0u32);
    for i in 0..pred.len() {
        for j in i + 1..pred.len() {
            let a = pred[i] == pred[j];
            let b = gold[i] == gold[j];
            sp += u32::from(a);
            sg += u32::from(b);
            both += u32::from(a && b);
        }
    }
    if sp == 0 && sg == 0 {
        return 1.0;
    }
    let p = if sp == 0 {
        0.0
    } else {
        f64::from(both) / f64::from(sp)
    };
    let r = if sg == 0 {
        0.0
    } else {
        f64::from(both) / f64::from(sg)
    };
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41_000);
    let mut worst_v: f64 = 0.0;
    let mut worst_f: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=12);
        let kp = rng.random_range(1..=n.min(5));
        let kg = rng.random_range(1..=n.min(5));
        let pred: Vec<usize> = (0..n).map(|_| rng.random_range(0..kp)).collect();
        let gold: Vec<usize> = (0..n).map(|_| rng.random_range(0..kg)).collect();
        let d = as_instances(&pred, &gold);
        worst_v = worst_v.max((v_score(&d).v - brute_v(&pred, &gold)).abs());
        worst_f = worst_f.max((paired_f1(&d).f1 - brute_f1(&pred, &gold)).abs());
    }

    let words = ["bank", "shore", "river", "money"];
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.15) {
            None
        } else {
            Some(words[rng.random_range(0..words.len())])
        }
    };
    let mut identity_failures = 0;
    for _ in 0..1000 {
        let t = rng.random_range(1..=30);
        let triples: Vec<AlignedTriple> = (0..t)
            .map(|_| AlignedTriple::new(pick(&mut rng), pick(&mut rng), pick(&mut rng)))
            .collect();
        let r = rho(&triples).unwrap();
        let c = confusion_matrix(&triples);
        let diff = c.system_only as f64 - c.baseline_only as f64;
        let exact = r.n_improved == c.system_only
            && r.n_degraded == c.baseline_only
            && r.t == t
            && r.rho == diff / t as f64
            && (r.rho * t as f64 - diff).abs() <= 1e-12 * t as f64;
        identity_failures += usize::from(!exact);
    }
    verdict(
        worst_v <= 1e-12 && worst_f <= 1e-12 && identity_failures == 0,
        format!(
            "1000 instances: max |dV| {worst_v:.1e}, max |dF1| {worst_f:.1e}; \
             rho identity failed on {identity_failures}/1000 triples"
        ),
    )
}

fn run_pipeline(config: &PipelineConfig, gold: &Path, dir: &Path) -> senseforge::Result<()> {
    let mut config = config.clone();
    config.models = Some(dir.join("models"));
    cmd_build(&config)?;
    let labeled = dir.join("corpus.labeled");
    let instances = dir.join("instances.tsv");
    cmd_label(&config, &labeled, Some(&instances))?;
    cmd_eval_wsi(
        &config,
        &WsiInputs {
            predicted: &instances,
            gold,
            out_dir: &dir.join("eval"),
            name: None,
        },
    )?;
    Ok(())
}

fn criterion_8() -> Outcome {
    let Some(root) = std::env::var_os("SENSEFORGE_SEMEVAL_DIR").map(PathBuf::from) else {
        return Outcome::Skip(
            "set SENSEFORGE_SEMEVAL_DIR to a directory with run.toml and gold.tsv".into(),
        );
    };
    let attempt = || -> Result<(f64, f64), String> {
        let config = PipelineConfig::load(root.join("run.toml")).map_err(|e| e.to_string())?;
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        run_pipeline(&config, &root.join("gold.tsv"), out.path()).map_err(|e| e.to_string())?;
        let text =
            fs::read_to_string(out.path().join("eval/wsi.json")).map_err(|e| e.to_string())?;
        let report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let average = report["all"]["average"].as_f64().unwrap_or(f64::NAN) * 100.0;
        let c = report["cluster_count"].as_f64().unwrap_or(f64::NAN);
        Ok((average, c))
    };
    match attempt() {
        Ok((average, c)) => verdict(
            (c - 4.45).abs() <= 1.0 && (average - 35.20).abs() <= 5.0,
            format!("average {average:.2} (target 35.20 +/- 5), C = {c:.2} (target 4.45 +/- 1)"),
        ),
        Err(e) => Outcome::Fail(format!("pipeline failed: {e}")),
    }
}

fn files_under(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_path_buf();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let base = PipelineConfig::load(fixtures.join("run.toml")).unwrap();
    let gold = fixtures.join("gold.tsv");
    let mut compared = 0;
    let mut differing = Vec::new();
    for method in [Method::Kmeans, Method::Crp, Method::Graph] {
        let mut config = base.clone();
        config.method = method;
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for dir in [a.path(), b.path()] {
            if let Err(e) = run_pipeline(&config, &gold, dir) {
                return Outcome::Fail(format!("{method}: {e}"));
            }
        }
        let (x, y) = (files_under(a.path()), files_under(b.path()));
        if x.keys().ne(y.keys()) {
            differing.push(format!("{method}: different file sets"));
        }
        for (rel, bytes) in &x {
            compared += 1;
            if y.get(rel) != Some(bytes) {
                differing.push(format!("{method}: {}", rel.display()));
            }
        }
    }
    verdict(
        differing.is_empty(),
        format!(
            "{compared} artifacts over kmeans/crp/graph runs; differing: {:?}",
            differing
        ),
    )
}

fn main() -> ExitCode {
    let synthetic = synthetic_suite();
    let results = [
        (
            "adaptive k-means recovers planted senses",
            criterion_1(&synthetic),
        ),
        ("small-cluster merge rule", criterion_2()),
        ("k-means objective monotonicity", criterion_3(&synthetic)),
        ("CRP hand trace and scale invariance", criterion_4()),
        ("personalized PageRank vs dense oracle", criterion_5()),
        (
            "sense-selection numerics and gradient checks",
            criterion_6(),
        ),
        ("metric oracles and rho identity", criterion_7()),
        ("SemEval-2010 reproduction (conditional)", criterion_8()),
        ("end-to-end determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("[{tag}] criterion {}: {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
