//! One line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use ustat_core::engine::*;
use ustat_core::graph::*;
use ustat_core::kernels::*;
use ustat_core::partitions::*;
use ustat_core::tensor::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn serial() -> EngineOptions {
    EngineOptions { parallel: false, ..Default::default() }
}

fn oracle_u() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let m = r.gen_range(2..=4);
        let n = r.gen_range(m..=8);
        let k = r.gen_range(1..=4);
        let sig = random_signature(&mut r, m, k, case % 4 == 0);
        let kernel = lookup_kernel(&mut r, &sig, n);
        let s = index_sample(n);
        let got = u_statistic(&kernel, &s, &EngineOptions::default()).map_err(|e| e.to_string())?;
        let want = u_brute_force(|x| kernel.evaluate(x).unwrap(), m, &s, DEFAULT_BRUTE_FORCE_CAP)
            .map_err(|e| e.to_string())?;
        let err = (got - want).abs() / want.abs().max(1e-300);
        let err = if want == 0.0 { got.abs() } else { err };
        worst = worst.max(err);
        check(err <= 1e-9, format!("case {case} signature {sig}: {got} vs {want}"))?;
    }
    Ok(format!("200 instances, worst relative error {worst:.1e}"))
}

fn oracle_einsum() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for case in 0..300 {
        let m = r.gen_range(1..=5);
        let k = r.gen_range(1..=4);
        let n = r.gen_range(1..=5);
        let sig = random_signature(&mut r, m, k, true);
        let out_len = r.gen_range(0..=m.min(3));
        let mut output: Vec<usize> = (0..m).collect();
        rand::seq::SliceRandom::shuffle(&mut output[..], &mut r);
        output.truncate(out_len);
        let ts: Vec<DenseTensor> = sig.tuples().iter().map(|t| random_tensor(&mut r, t.len(), n)).collect();
        let notation = EinsumNotation::new(sig.tuples().to_vec(), output.clone());
        let got = einsum(&ts, &notation, None).map_err(|e| e.to_string())?;
        let want = naive_einsum(&ts, sig.tuples(), &output, n);
        for (g, w) in got.as_slice().iter().zip(&want) {
            let err = if *w == 0.0 { g.abs() } else { (g - w).abs() / w.abs() };
            worst = worst.max(err);
            check(err <= 1e-10, format!("case {case} {notation}: {g} vs {w}"))?;
        }
        if out_len == 0 {
            // the V-statistic is the scalar contraction of the components
            let v = v_statistic(&lookup_kernel(&mut rng(case), &sig, n), &index_sample(n), &serial())
                .map_err(|e| e.to_string())?;
            let kernel = lookup_kernel(&mut rng(case), &sig, n);
            let want = v_brute_force(|x| kernel.evaluate(x).unwrap(), m, &index_sample(n), u128::MAX)
                .map_err(|e| e.to_string())?;
            check(rel_err(v, want) <= 1e-10, format!("case {case} V: {v} vs {want}"))?;
        }
    }
    Ok(format!("300 notations, worst relative error {worst:.1e}"))
}

fn chain_table() -> Outcome {
    let rows: [(usize, u128, u64, usize); 9] = [
        (2, 2, 1, 1),
        (3, 5, 2, 1),
        (4, 15, 5, 2),
        (5, 52, 15, 2),
        (6, 203, 52, 2),
        (7, 877, 203, 2),
        (8, 4140, 877, 3),
        (9, 21147, 4140, 3),
        (10, 115975, 21147, 3),
    ];
    for (m, bell, sparsified, width) in rows {
        let rep = complexity_report(&Signature::chain(m).unwrap(), &ReportOptions::default())
            .map_err(|e| e.to_string())?;
        check(
            (rep.bell, rep.sparsified, rep.max_width) == (bell, sparsified, width),
            format!("m = {m}: got ({}, {}, {})", rep.bell, rep.sparsified, rep.max_width),
        )?;
    }
    Ok("m = 2..10 match bell, sparsified and M columns".into())
}

fn witnesses() -> Outcome {
    for (e, g) in max_width_witnesses() {
        let want = max_treewidth_by_edges(e).map_err(|x| x.to_string())?;
        let got = treewidth_exact(&g).map_err(|x| x.to_string())?.width;
        check(got == want, format!("e = {e}: treewidth {got}, table {want}"))?;
    }
    for n in 2..=6 {
        let kn = SimpleGraph::complete(n);
        check(treewidth_exact(&kn).unwrap().width == n - 1, format!("K{n}"))?;
        let mut minus = SimpleGraph::with_vertices(n);
        for (a, b) in kn.edges().into_iter().skip(1) {
            minus.add_edge(a, b).unwrap();
        }
        check(treewidth_exact(&minus).unwrap().width == n - 2, format!("K{n} minus an edge"))?;
    }
    Ok("15 witness graphs, K_n and K_n minus an edge for n <= 6".into())
}

fn edge_table() -> Outcome {
    let table = [1usize, 1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 5];
    let witnesses = max_width_witnesses();
    for (e, &t) in (1..=15).zip(&table) {
        let got = max_treewidth_by_edges(e).map_err(|x| x.to_string())?;
        check(got == t, format!("t({e}) = {got}, expected {t}"))?;
        let (_, g) = &witnesses[e - 1];
        check(g.edge_count() == e, format!("witness for e = {e} has {} edges", g.edge_count()))?;
        check(treewidth_exact(g).unwrap().width >= t, format!("witness for e = {e} below t(e)"))?;
    }
    Ok("table for e = 1..15 with matching witnesses".into())
}

fn motifs() -> Outcome {
    let mut r = rng(6);
    let patterns = census_patterns();
    for trial in 0..10 {
        let g = erdos_renyi(&mut r, 30, 0.3);
        for (id, k, pattern) in &patterns {
            let got = motif_count(&g, &MotifSpec::get(*id), &EngineOptions::default())
                .map_err(|e| e.to_string())?;
            let want = census(&g, *k, pattern);
            check(got == want, format!("graph {trial} {id}: {got} vs census {want}"))?;
        }
    }
    Ok("10 graphs G(30, 0.3), r1..r8 exact".into())
}

fn dcov() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let (dx, dy) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let x = points(&mut r, 30, dx);
        let y = points(&mut r, 30, dy);
        let got = dcov_squared(&x, &y, &EngineOptions::default()).map_err(|e| e.to_string())?;
        let want = dcov_squared_brute(&x, &y).map_err(|e| e.to_string())?;
        let err = (got - want).abs() / want.abs();
        worst = worst.max(err);
        check(err <= 1e-10, format!("sample {trial}: {got} vs {want}"))?;
    }
    Ok(format!("20 samples, n = 30, worst relative error {worst:.1e}"))
}

fn extended_decomposition() -> Outcome {
    let mut r = rng(8);
    let mut checked = 0;
    for _ in 0..40 {
        let m = r.gen_range(1..=4);
        let n = r.gen_range(m..=6);
        let k = r.gen_range(1..=4);
        let sig = random_signature(&mut r, m, k, true);
        let kernel = lookup_kernel(&mut r, &sig, n);
        let s = index_sample(n);
        let ps: Vec<SetPartition> = enumerate_partitions(m).unwrap().collect();
        let vs: Vec<f64> = ps.iter().map(|p| restricted_v(&kernel, &s, p, &serial()).unwrap()).collect();
        for pi in &ps {
            let want = restricted_u_brute(|x| kernel.evaluate(x).unwrap(), &s, pi, u128::MAX).unwrap();
            let got: f64 = ps
                .iter()
                .zip(&vs)
                .filter(|(rho, _)| pi.refines(rho))
                .map(|(rho, v)| mobius_pair(pi, rho).unwrap() as f64 * v)
                .sum();
            check(rel_err(got, want) <= 1e-9, format!("{sig} at {pi}: {got} vs {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} restricted statistics"))
}

/// Best of `reps` contraction times, tensorization excluded.
fn hoif_contraction_time(j: usize, n: usize, reps: usize) -> Duration {
    let phi: FeatureMap = Arc::new(|z: &[f64]| z.to_vec());
    let mut r = rng(9);
    let obs: Vec<HoifObservation> = (0..n)
        .map(|_| HoifObservation {
            a: f64::from(u8::from(r.gen_bool(0.6))),
            y: r.gen_range(-1.0..1.0),
            z: vec![1.0, r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)],
        })
        .collect();
    let s = Sample::new(obs).unwrap();
    let kernel = hoif_kernel(j, phi).unwrap();
    let tensors = tensorize(&kernel, &s, &EngineOptions::default()).unwrap();
    let opts = serial();
    (0..reps)
        .map(|_| u_from_tensors(&tensors, kernel.signature(), &opts).unwrap().contract_time)
        .min()
        .unwrap()
}

fn scaling() -> Outcome {
    let t1 = hoif_contraction_time(4, 1000, 3);
    let t2 = hoif_contraction_time(4, 2000, 3);
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    check((2.5..=6.5).contains(&ratio), format!("j = 4 ratio {ratio:.2} ({t1:?} -> {t2:?})"))?;
    let t6 = hoif_contraction_time(6, 2000, 1);
    check(t6 < Duration::from_secs(600), format!("j = 6 at n = 2000 took {t6:?}"))?;
    Ok(format!("j = 4 ratio {ratio:.2}; j = 6 at n = 2000 in {:.1} s", t6.as_secs_f64()))
}

fn neutrality() -> Outcome {
    let mut r = rng(10);
    for case in 0..100 {
        let m = r.gen_range(1..=4);
        let n = r.gen_range(m..=6);
        let k = r.gen_range(1..=4);
        let sig = random_signature(&mut r, m, k, case % 3 == 0);
        let kernel = lookup_kernel(&mut r, &sig, n);
        let s = index_sample(n);
        let sparse = u_statistic(&kernel, &s, &serial()).unwrap();
        let full = u_statistic(&kernel, &s, &EngineOptions { sparsify: false, ..serial() }).unwrap();
        check(rel_err(sparse, full) <= 1e-9, format!("case {case} {sig}: {sparse} vs {full}"))?;
    }
    Ok("100 kernels, sparsified equals full Bell sum".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence (U)", oracle_u),
        ("oracle equivalence (V and einsum)", oracle_einsum),
        ("chain signature combinatorics", chain_table),
        ("treewidth witnesses", witnesses),
        ("t(e) lookup", edge_table),
        ("motif correctness", motifs),
        ("dCov correctness", dcov),
        ("extended decomposition", extended_decomposition),
        ("scaling", scaling),
        ("sparsification neutrality", neutrality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
