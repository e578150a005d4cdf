mod common;

use common::{naive_einsum, random_signature, random_tensor, rel_err, rng};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use ustat_core::graph::{decomposition_graph, eliminate_vertex, treewidth_exact};
use ustat_core::tensor::*;

fn identity(n: usize) -> DenseTensor {
    DenseTensor::from_fn(2, n, DEFAULT_MEM_CAP, |i| f64::from(u8::from(i[0] == i[1]))).unwrap()
}

fn ones(order: usize, n: usize) -> DenseTensor {
    DenseTensor::from_fn(order, n, DEFAULT_MEM_CAP, |_| 1.0).unwrap()
}

#[test]
fn tensor_from_function_examples() {
    let s = tensor_from_function(0, 5, DEFAULT_MEM_CAP, |_| 3.5).unwrap();
    assert_eq!(s.scalar_value(), Some(3.5));
    let t = tensor_from_function(2, 2, DEFAULT_MEM_CAP, |i| (i[0] + 2 * i[1]) as f64).unwrap();
    assert_eq!(t.as_slice(), &[0.0, 2.0, 1.0, 3.0]);
    let err = tensor_from_function(4, 10, 9_999, |_| 0.0).unwrap_err();
    assert!(matches!(err, TensorError::MemoryCapExceeded { .. }));
}

#[test]
fn validate_notation_examples() {
    let c = validate_notation(&EinsumNotation::scalar(vec![vec![7, 9], vec![9, 3]])).unwrap();
    assert_eq!(c.inputs(), &[vec![0, 1], vec![1, 2]]);
    let unused = EinsumNotation::new(vec![vec![1, 2]], vec![3]);
    assert!(matches!(validate_notation(&unused), Err(TensorError::InvalidOutput(_))));
    let dup = EinsumNotation::new(vec![vec![1, 2], vec![2, 3]], vec![1, 1]);
    assert!(matches!(validate_notation(&dup), Err(TensorError::InvalidOutput(_))));
}

#[test]
fn matrix_product_of_identities() {
    let n = EinsumNotation::new(vec![vec![1, 2], vec![2, 3]], vec![1, 3]);
    assert_eq!(einsum(&[identity(2), identity(2)], &n, None).unwrap(), identity(2));
}

#[test]
fn all_ones_chain_counts_terms() {
    let n = EinsumNotation::scalar(vec![vec![1, 2], vec![2, 3], vec![3, 4]]);
    let t = einsum(&[ones(2, 2), ones(2, 2), ones(2, 2)], &n, None).unwrap();
    assert_eq!(t.scalar_value(), Some(16.0));
}

#[test]
fn higher_order_partial_trace() {
    let mut r = rng(11);
    let inputs = vec![vec![1, 2, 3], vec![2, 4, 5], vec![3, 6]];
    let output = vec![1, 5, 6];
    let ts = vec![random_tensor(&mut r, 3, 3), random_tensor(&mut r, 3, 3), random_tensor(&mut r, 2, 3)];
    let got = einsum(&ts, &EinsumNotation::new(inputs.clone(), output.clone()), None).unwrap();
    let want = naive_einsum(&ts, &inputs, &output, 3);
    for (g, w) in got.as_slice().iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12 * w.abs().max(1.0));
    }
}

#[test]
fn shape_errors() {
    let n = EinsumNotation::scalar(vec![vec![0, 1], vec![1, 2]]);
    let e = einsum(&[identity(2)], &n, None).unwrap_err();
    assert!(matches!(e, TensorError::ShapeMismatch(_)));
    let e = einsum(&[identity(2), identity(3)], &n, None).unwrap_err();
    assert!(matches!(e, TensorError::ShapeMismatch(_)));
    let e = einsum(&[identity(2), ones(3, 2)], &n, None).unwrap_err();
    assert!(matches!(e, TensorError::ShapeMismatch(_)));
}

#[test]
fn eliminate_index_examples() {
    let mut r = rng(5);
    let a = random_tensor(&mut r, 2, 4);
    let (rows, axes) = eliminate_index(&[(&a, &[1, 2][..])], 2).unwrap();
    assert_eq!(axes, vec![1]);
    for i in 0..4 {
        let want: f64 = (0..4).map(|j| a.get(&[i, j])).sum();
        assert!((rows.as_slice()[i] - want).abs() < 1e-14);
    }

    let b = random_tensor(&mut r, 2, 4);
    let (prod, axes) = eliminate_index(&[(&a, &[1, 2][..]), (&b, &[2, 3][..])], 2).unwrap();
    let want = naive_einsum(&[a.clone(), b.clone()], &[vec![1, 2], vec![2, 3]], &axes, 4);
    for (g, w) in prod.as_slice().iter().zip(&want) {
        assert!((g - w).abs() < 1e-12);
    }

    // eliminate 2, 3, 1, 4 on three all-ones matrices
    let o = ones(2, 2);
    let (t1, ax1) = eliminate_index(&[(&o, &[1, 2][..]), (&o, &[2, 3][..])], 2).unwrap();
    let (t2, ax2) = eliminate_index(&[(&t1, &ax1[..]), (&o, &[3, 4][..])], 3).unwrap();
    let (t3, ax3) = eliminate_index(&[(&t2, &ax2[..])], 1).unwrap();
    let (t4, ax4) = eliminate_index(&[(&t3, &ax3[..])], 4).unwrap();
    assert!(ax4.is_empty());
    assert_eq!(t4.scalar_value(), Some(16.0));

    assert_eq!(eliminate_index(&[(&a, &[1, 2][..])], 3).unwrap_err(), TensorError::IndexAbsent(3));
}

#[test]
fn optimize_order_examples() {
    let chain = EinsumNotation::scalar(vec![vec![1, 2], vec![2, 3], vec![3, 4]]);
    assert_eq!(optimize_order(&chain, OrderStrategy::Exhaustive).unwrap().predicted_width, 1);

    let triangle = EinsumNotation::scalar(vec![vec![1, 2], vec![2, 3], vec![3, 1]]);
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        assert_eq!(elimination_width(&triangle, &perm).unwrap(), 2);
    }

    let k4 = EinsumNotation::scalar(vec![vec![1, 2, 3], vec![1, 3, 4], vec![1, 2, 4], vec![2, 3, 4]]);
    assert_eq!(optimize_order(&k4, OrderStrategy::Exhaustive).unwrap().predicted_width, 3);
}

#[derive(Debug, Clone)]
struct Instance {
    inputs: Vec<Vec<usize>>,
    output: Vec<usize>,
    n: usize,
    seed: u64,
}

fn instance(max_m: usize, max_k: usize, max_n: usize, with_output: bool) -> impl Strategy<Value = Instance> {
    (1..=max_m, 1..=max_k, 1..=max_n, any::<u64>()).prop_map(move |(m, k, n, seed)| {
        let mut r = rng(seed);
        let sig = random_signature(&mut r, m, k, true);
        // scatter labels so canonicalization has work to do
        let offset = r.gen_range(0..7);
        let inputs: Vec<Vec<usize>> =
            sig.tuples().iter().map(|t| t.iter().map(|i| 3 * i + offset).collect()).collect();
        let mut output: Vec<usize> = (0..m).map(|i| 3 * i + offset).collect();
        output.shuffle(&mut r);
        output.truncate(if with_output { r.gen_range(0..=m.min(3)) } else { 0 });
        Instance { inputs, output, n, seed }
    })
}

fn tensors_for(inst: &Instance) -> Vec<DenseTensor> {
    let mut r = rng(inst.seed ^ 0x9e37);
    inst.inputs.iter().map(|t| random_tensor(&mut r, t.len(), inst.n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn einsum_matches_naive_loops(inst in instance(5, 4, 5, true)) {
        let ts = tensors_for(&inst);
        let notation = EinsumNotation::new(inst.inputs.clone(), inst.output.clone());
        let got = einsum(&ts, &notation, None).unwrap();
        let want = naive_einsum(&ts, &inst.inputs, &inst.output, inst.n);
        prop_assert_eq!(got.len(), want.len());
        for (g, w) in got.as_slice().iter().zip(&want) {
            prop_assert!(rel_err(*g, *w) <= 1e-10, "{} vs {}", g, w);
        }
    }

    #[test]
    fn result_is_order_independent(inst in instance(5, 4, 4, true), shuffle_seed in any::<u64>()) {
        let ts = tensors_for(&inst);
        let notation = EinsumNotation::new(inst.inputs.clone(), inst.output.clone());
        let canon = validate_notation(&notation).unwrap();
        let m = canon.index_count();
        let mut summed: Vec<usize> = (0..m).filter(|i| !canon.output().contains(i)).collect();
        summed.shuffle(&mut rng(shuffle_seed));
        let order: Vec<usize> = summed.into_iter().chain(canon.output().iter().copied()).collect();
        let a = einsum_with(&ts, &notation, Some(&order), &ContractionOptions::default()).unwrap().0;
        let b = einsum(&ts, &notation, None).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert!(rel_err(*x, *y) <= 1e-9);
        }
    }

    #[test]
    fn predicted_width_matches_graph_elimination(inst in instance(6, 5, 1, false), strategy in 0..3usize) {
        let strategy = [OrderStrategy::GreedyMinDegree, OrderStrategy::GreedyMinFill, OrderStrategy::Exhaustive][strategy];
        let canon = validate_notation(&EinsumNotation::scalar(inst.inputs.clone())).unwrap();
        let plan = optimize_order(&canon, strategy).unwrap();
        let mut g = decomposition_graph(canon.inputs());
        let mut width = 0;
        for &v in &plan.order {
            width = width.max(g.degree(v).unwrap());
            g = eliminate_vertex(&g, v).unwrap();
        }
        prop_assert_eq!(plan.predicted_width, width);
    }

    #[test]
    fn exhaustive_width_is_treewidth(inst in instance(6, 6, 1, false)) {
        let canon = validate_notation(&EinsumNotation::scalar(inst.inputs.clone())).unwrap();
        let plan = optimize_order(&canon, OrderStrategy::Exhaustive).unwrap();
        let tw = treewidth_exact(&decomposition_graph(canon.inputs())).unwrap().width;
        prop_assert_eq!(plan.predicted_width, tw);
        for s in [OrderStrategy::GreedyMinDegree, OrderStrategy::GreedyMinFill] {
            prop_assert!(optimize_order(&canon, s).unwrap().predicted_width >= tw);
        }
    }

    #[test]
    fn stats_follow_cost_model(inst in instance(5, 4, 5, true)) {
        let ts = tensors_for(&inst);
        let notation = EinsumNotation::new(inst.inputs.clone(), inst.output.clone());
        let plan = optimize_order(&notation, OrderStrategy::GreedyMinFill).unwrap();
        let (_, stats) = einsum_with(&ts, &notation, Some(&plan.order), &ContractionOptions::default()).unwrap();
        let predicted = contraction_cost(&notation, &plan.order, inst.n).unwrap();
        prop_assert_eq!(stats.flops, predicted.flops);
        prop_assert!(stats.peak_entries <= plan.predicted_peak_entries(inst.n));
    }
}
