use std::borrow::{Borrow, Cow};
use std::collections::BTreeSet;

use super::dense::{DenseTensor, DEFAULT_MEM_CAP};
use super::notation::{validate_notation, EinsumNotation};
use super::order::{check_permutation, optimize_order, EliminationOrder, OrderStrategy};
use super::{check_cap, entry_count, TensorError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractionOptions {
    pub strategy: OrderStrategy,
    pub mem_cap: u64,
}

impl Default for ContractionOptions {
    fn default() -> Self {
        Self { strategy: OrderStrategy::Auto, mem_cap: DEFAULT_MEM_CAP }
    }
}

/// Work done by a contraction. `flops` counts one operation per addition
/// and one per multiplication of the elimination steps plus the final
/// assembly of the output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ContractionStats {
    pub flops: u128,
    pub peak_entries: u128,
    pub steps: usize,
}

struct Factor<'a> {
    data: Cow<'a, [f64]>,
    axes: Vec<usize>,
}

fn step_cost(n: usize, d: usize, k: usize) -> u128 {
    let n128 = n as u128;
    (n128 - 1) * entry_count(d - 1, n) + (k as u128 - 1) * entry_count(d, n)
}

/// Contract `tensors` according to `notation`. The order, if given, is over
/// the canonical labels of the notation.
pub fn einsum<T: Borrow<DenseTensor>>(
    tensors: &[T],
    notation: &EinsumNotation,
    order: Option<&EliminationOrder>,
) -> Result<DenseTensor, TensorError> {
    einsum_with(tensors, notation, order.map(|o| o.order.as_slice()), &ContractionOptions::default())
        .map(|(t, _)| t)
}

pub fn einsum_with<T: Borrow<DenseTensor>>(
    tensors: &[T],
    notation: &EinsumNotation,
    order: Option<&[usize]>,
    opts: &ContractionOptions,
) -> Result<(DenseTensor, ContractionStats), TensorError> {
    let canon = validate_notation(notation)?;
    let n = check_shapes(tensors, &canon)?;
    let m = canon.index_count();
    let planned;
    let order = match order {
        Some(o) => {
            check_permutation(o, m)?;
            o
        }
        None => {
            planned = optimize_order(&canon, opts.strategy)?;
            planned.order.as_slice()
        }
    };
    let mut is_output = vec![false; m];
    for &b in canon.output() {
        is_output[b] = true;
    }

    let mut stats = ContractionStats::default();
    let mut factors: Vec<Factor> = tensors
        .iter()
        .zip(canon.inputs())
        .map(|(t, axes)| Factor { data: Cow::Borrowed(t.borrow().as_slice()), axes: axes.clone() })
        .collect();

    for &e in order.iter().filter(|&&e| !is_output[e]) {
        let (part, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.axes.contains(&e));
        factors = rest;
        let union: BTreeSet<usize> = part.iter().flat_map(|f| f.axes.iter().copied()).collect();
        check_cap(union.len() - 1, n, opts.mem_cap)?;
        stats.flops += step_cost(n, union.len(), part.len());
        stats.steps += 1;
        factors.push(eliminate(part, e, n, opts.mem_cap, &mut stats));
    }

    let out = assemble(&factors, canon.output(), n, opts.mem_cap, &mut stats)?;
    Ok((out, stats))
}

/// Work a contraction would do, without touching any data.
pub fn contraction_cost(
    notation: &EinsumNotation,
    order: &[usize],
    n: usize,
) -> Result<ContractionStats, TensorError> {
    let canon = validate_notation(notation)?;
    let m = canon.index_count();
    check_permutation(order, m)?;
    let output: BTreeSet<usize> = canon.output().iter().copied().collect();
    let mut tuples: Vec<BTreeSet<usize>> =
        canon.inputs().iter().map(|t| t.iter().copied().collect()).collect();
    let mut stats = ContractionStats::default();
    for &e in order.iter().filter(|e| !output.contains(e)) {
        let (part, rest): (Vec<_>, Vec<_>) = tuples.into_iter().partition(|t| t.contains(&e));
        tuples = rest;
        let mut union: BTreeSet<usize> = part.iter().flatten().copied().collect();
        stats.flops += step_cost(n, union.len(), part.len());
        stats.steps += 1;
        union.remove(&e);
        stats.peak_entries = stats.peak_entries.max(entry_count(union.len(), n));
        tuples.push(union);
    }
    let live = tuples.iter().filter(|t| !t.is_empty()).count().max(1);
    let out_entries = entry_count(output.len(), n);
    stats.flops += (live as u128 - 1) * out_entries;
    stats.peak_entries = stats.peak_entries.max(out_entries);
    Ok(stats)
}

/// One elimination step: multiply the given tensors and sum out `index`.
/// Returns the result together with its axis labels.
pub fn eliminate_index(
    parts: &[(&DenseTensor, &[usize])],
    index: usize,
) -> Result<(DenseTensor, Vec<usize>), TensorError> {
    let Some((first, _)) = parts.first() else {
        return Err(TensorError::EmptyNotation);
    };
    let n = first.extent();
    for (t, axes) in parts {
        if t.order() != axes.len() || (t.order() > 0 && t.extent() != n) {
            return Err(TensorError::ShapeMismatch("tensor does not match its axes".into()));
        }
    }
    if !parts.iter().any(|(_, a)| a.contains(&index)) {
        return Err(TensorError::IndexAbsent(index));
    }
    let factors: Vec<Factor> =
        parts.iter().map(|(t, a)| Factor { data: Cow::Borrowed(t.as_slice()), axes: a.to_vec() }).collect();
    let mut stats = ContractionStats::default();
    let f = eliminate(factors, index, n, u64::MAX, &mut stats);
    let axes = f.axes.clone();
    Ok((DenseTensor::new(axes.len(), n, f.data.into_owned())?, axes))
}

/// Notation sequence of an elimination order: entry `k` holds the tuples
/// left after the first `k` eliminations. Each new tuple is sorted.
pub fn notation_sequence(inputs: &[Vec<usize>], order: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut current = inputs.to_vec();
    let mut seq = vec![current.clone()];
    for &e in order {
        let (part, rest): (Vec<_>, Vec<_>) = current.into_iter().partition(|t| t.contains(&e));
        current = rest;
        let s: BTreeSet<usize> = part.iter().flatten().copied().filter(|&i| i != e).collect();
        if !s.is_empty() {
            current.push(s.into_iter().collect());
        }
        seq.push(current.clone());
    }
    seq
}

fn check_shapes<T: Borrow<DenseTensor>>(tensors: &[T], canon: &EinsumNotation) -> Result<usize, TensorError> {
    if tensors.len() != canon.inputs().len() {
        return Err(TensorError::ShapeMismatch(format!(
            "{} tensors for {} input tuples",
            tensors.len(),
            canon.inputs().len()
        )));
    }
    let n = tensors[0].borrow().extent();
    for (k, (t, axes)) in tensors.iter().zip(canon.inputs()).enumerate() {
        let t = t.borrow();
        if t.order() != axes.len() {
            return Err(TensorError::ShapeMismatch(format!(
                "tensor {k} has order {} but its tuple has {} indices",
                t.order(),
                axes.len()
            )));
        }
        if t.extent() != n {
            return Err(TensorError::ShapeMismatch(format!(
                "tensor {k} has extent {} but tensor 0 has extent {n}",
                t.extent()
            )));
        }
    }
    Ok(n)
}

fn strides(order: usize, n: usize) -> Vec<usize> {
    let mut s = vec![1usize; order];
    for p in (0..order.saturating_sub(1)).rev() {
        s[p] = s[p + 1] * n;
    }
    s
}

/// Offset increments of `f` along each label of `axes`.
fn coefficients(f: &Factor, axes: &[usize], n: usize) -> Vec<usize> {
    let st = strides(f.axes.len(), n);
    axes.iter().map(|l| f.axes.iter().zip(&st).filter(|(a, _)| *a == l).map(|(_, s)| s).sum()).collect()
}

/// `out[a] = sum_t prod_f f[a, t]` over the labels `axes` (and `summed` if
/// given). Every label of every factor must appear in `axes` or `summed`.
fn product_sum(factors: &[&Factor], axes: &[usize], summed: Option<usize>, n: usize) -> Vec<f64> {
    let r = axes.len();
    let coefs: Vec<Vec<usize>> = factors.iter().map(|f| coefficients(f, axes, n)).collect();
    let sc: Vec<usize> = match summed {
        Some(e) => factors.iter().map(|f| coefficients(f, &[e], n)[0]).collect(),
        None => Vec::new(),
    };
    let data: Vec<&[f64]> = factors.iter().map(|f| f.data.as_ref()).collect();
    let total = entry_count(r, n) as usize;
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; r];
    let mut base = vec![0usize; factors.len()];
    for _ in 0..total {
        let v = if summed.is_some() {
            let mut acc = 0.0;
            for t in 0..n {
                let mut p = 1.0;
                for (f, d) in data.iter().enumerate() {
                    p *= d[base[f] + t * sc[f]];
                }
                acc += p;
            }
            acc
        } else {
            data.iter().zip(&base).map(|(d, &b)| d[b]).product()
        };
        out.push(v);
        for p in (0..r).rev() {
            idx[p] += 1;
            if idx[p] < n {
                for (b, c) in base.iter_mut().zip(&coefs) {
                    *b += c[p];
                }
                break;
            }
            idx[p] = 0;
            for (b, c) in base.iter_mut().zip(&coefs) {
                *b -= (n - 1) * c[p];
            }
        }
    }
    out
}

/// Lay `f` out along `axes`, borrowing when it already is.
fn arrange<'a>(f: &'a Factor, axes: &[usize], n: usize, stats: &mut ContractionStats) -> Cow<'a, [f64]> {
    if f.axes == axes {
        Cow::Borrowed(f.data.as_ref())
    } else {
        let v = product_sum(&[f], axes, None, n);
        stats.peak_entries = stats.peak_entries.max(v.len() as u128);
        Cow::Owned(v)
    }
}

fn label_set(f: &Factor) -> BTreeSet<usize> {
    f.axes.iter().copied().collect()
}

fn eliminate<'a>(
    mut part: Vec<Factor<'a>>,
    e: usize,
    n: usize,
    cap: u64,
    stats: &mut ContractionStats,
) -> Factor<'a> {
    // Fold extra factors together elementwise, smallest union first, until
    // two remain for a matrix product.
    while part.len() > 2 {
        let mut best = (usize::MAX, 0, 0);
        for i in 0..part.len() {
            for j in i + 1..part.len() {
                let u = label_set(&part[i]).union(&label_set(&part[j])).count();
                if u < best.0 {
                    best = (u, i, j);
                }
            }
        }
        let (u, i, j) = best;
        if entry_count(u, n) > cap as u128 {
            break;
        }
        let g = part.swap_remove(j);
        let f = part.swap_remove(i);
        let axes: Vec<usize> = label_set(&f).union(&label_set(&g)).copied().collect();
        let data = product_sum(&[&f, &g], &axes, None, n);
        stats.peak_entries = stats.peak_entries.max(data.len() as u128);
        part.push(Factor { data: Cow::Owned(data), axes });
    }
    let result = if part.len() == 2 {
        contract_pair(&part[0], &part[1], e, n, stats)
    } else {
        let axes: Vec<usize> = part
            .iter()
            .flat_map(|f| f.axes.iter().copied())
            .filter(|&a| a != e)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let refs: Vec<&Factor> = part.iter().collect();
        let data = product_sum(&refs, &axes, Some(e), n);
        Factor { data: Cow::Owned(data), axes }
    };
    stats.peak_entries = stats.peak_entries.max(result.data.len() as u128);
    result
}

/// Two-factor step as batched matrix products.
fn contract_pair<'a>(f: &Factor, g: &Factor, e: usize, n: usize, stats: &mut ContractionStats) -> Factor<'a> {
    let fs: BTreeSet<usize> = f.axes.iter().copied().filter(|&a| a != e).collect();
    let gs: BTreeSet<usize> = g.axes.iter().copied().filter(|&a| a != e).collect();
    let batch: Vec<usize> = fs.intersection(&gs).copied().collect();
    let left: Vec<usize> = fs.difference(&gs).copied().collect();
    let right: Vec<usize> = gs.difference(&fs).copied().collect();

    let a_axes: Vec<usize> = batch.iter().chain(&left).copied().chain([e]).collect();
    let b_axes: Vec<usize> = batch.iter().copied().chain([e]).chain(right.iter().copied()).collect();
    let a = arrange(f, &a_axes, n, stats);
    let b = arrange(g, &b_axes, n, stats);

    let nb = entry_count(batch.len(), n) as usize;
    let rows = entry_count(left.len(), n) as usize;
    let cols = entry_count(right.len(), n) as usize;
    let mut c = vec![0.0; nb * rows * cols];
    if rows == 1 && cols == 1 {
        for (k, out) in c.iter_mut().enumerate() {
            let x = &a[k * n..(k + 1) * n];
            let y = &b[k * n..(k + 1) * n];
            *out = x.iter().zip(y).map(|(p, q)| p * q).sum();
        }
    } else {
        for k in 0..nb {
            let ap = a[k * rows * n..].as_ptr();
            let bp = b[k * n * cols..].as_ptr();
            let cp = c[k * rows * cols..].as_mut_ptr();
            // SAFETY: the three blocks are in bounds for the given row-major
            // shapes (rows x n, n x cols, rows x cols) and `c` does not alias.
            unsafe {
                matrixmultiply::dgemm(
                    rows,
                    n,
                    cols,
                    1.0,
                    ap,
                    n as isize,
                    1,
                    bp,
                    cols as isize,
                    1,
                    0.0,
                    cp,
                    cols as isize,
                    1,
                );
            }
        }
    }
    let axes = batch.into_iter().chain(left).chain(right).collect();
    Factor { data: Cow::Owned(c), axes }
}

fn assemble(
    factors: &[Factor],
    output: &[usize],
    n: usize,
    cap: u64,
    stats: &mut ContractionStats,
) -> Result<DenseTensor, TensorError> {
    let len = check_cap(output.len(), n, cap)?;
    let live: Vec<&Factor> = factors.iter().filter(|f| !f.axes.is_empty()).collect();
    let scale: f64 = factors.iter().filter(|f| f.axes.is_empty()).map(|f| f.data[0]).product();
    stats.flops += (live.len().max(1) as u128 - 1) * len as u128;
    stats.peak_entries = stats.peak_entries.max(len as u128);
    let mut data = if live.is_empty() {
        vec![1.0]
    } else if live.len() == 1 && live[0].axes == output {
        live[0].data.to_vec()
    } else {
        product_sum(&live, output, None, n)
    };
    if scale != 1.0 {
        for x in &mut data {
            *x *= scale;
        }
    }
    DenseTensor::new(output.len(), n, data)
}
