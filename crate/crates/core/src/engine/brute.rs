//! Reference evaluators that sum the kernel term by term.

use super::{MdKernel, Sample, StatError};
use crate::partitions::SetPartition;
use crate::tensor::for_each_index;

pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 10_000_000;

fn falling(n: usize, k: usize) -> u128 {
    (0..k).map(|i| n.saturating_sub(i) as u128).product()
}

fn power(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

fn guard(terms: u128, cap: u128) -> Result<(), StatError> {
    if terms > cap {
        return Err(StatError::TooManyTerms { terms, cap });
    }
    Ok(())
}

/// Visit every ordered tuple of `k` distinct values from `0..n`.
fn for_each_injection(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(n: usize, k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, k, used, cur, f);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, k, &mut vec![false; n], &mut Vec::with_capacity(k), &mut f);
}

/// Sum of `h` over all ordered `m`-tuples of distinct sample indices.
pub fn u_brute_force<T>(
    h: impl Fn(&[&T]) -> f64,
    m: usize,
    sample: &Sample<T>,
    cap: u128,
) -> Result<f64, StatError> {
    let n = sample.len();
    if n < m {
        return Err(StatError::SampleTooSmall { n, needed: m });
    }
    guard(falling(n, m), cap)?;
    let mut total = 0.0;
    for_each_injection(n, m, |idx| {
        let args: Vec<&T> = idx.iter().map(|&i| sample.get(i)).collect();
        total += h(&args);
    });
    Ok(total)
}

/// Sum of `h` over all of `[n]^m`.
pub fn v_brute_force<T>(
    h: impl Fn(&[&T]) -> f64,
    m: usize,
    sample: &Sample<T>,
    cap: u128,
) -> Result<f64, StatError> {
    let n = sample.len();
    guard(power(n, m), cap)?;
    let mut total = 0.0;
    for_each_index(m, n, |idx| {
        let args: Vec<&T> = idx.iter().map(|&i| sample.get(i)).collect();
        total += h(&args);
    });
    Ok(total)
}

fn kernel_fn<T>(kernel: &MdKernel<T>) -> impl Fn(&[&T]) -> f64 + '_ {
    move |args| kernel.evaluate(args).expect("kernel evaluation")
}

pub fn u_brute_force_kernel<T>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    cap: u128,
) -> Result<f64, StatError> {
    u_brute_force(kernel_fn(kernel), kernel.order(), sample, cap)
}

pub fn v_brute_force_kernel<T>(
    kernel: &MdKernel<T>,
    sample: &Sample<T>,
    cap: u128,
) -> Result<f64, StatError> {
    v_brute_force(kernel_fn(kernel), kernel.order(), sample, cap)
}

/// Sum of `h` over tuples equal exactly within the blocks of `pi` and
/// distinct across blocks.
pub fn restricted_u_brute<T>(
    h: impl Fn(&[&T]) -> f64,
    sample: &Sample<T>,
    pi: &SetPartition,
    cap: u128,
) -> Result<f64, StatError> {
    let n = sample.len();
    guard(falling(n, pi.block_count()), cap)?;
    let mut total = 0.0;
    if n < pi.block_count() {
        return Ok(0.0);
    }
    for_each_injection(n, pi.block_count(), |vals| {
        let args: Vec<&T> = (0..pi.len()).map(|i| sample.get(vals[pi.block_of(i)])).collect();
        total += h(&args);
    });
    Ok(total)
}

/// Sum of `h` over tuples constant on each block of `pi`, by scanning all
/// of `[n]^m` and testing membership.
pub fn restricted_v_brute<T>(
    h: impl Fn(&[&T]) -> f64,
    sample: &Sample<T>,
    pi: &SetPartition,
    cap: u128,
) -> Result<f64, StatError> {
    let n = sample.len();
    let m = pi.len();
    guard(power(n, m), cap)?;
    let mut total = 0.0;
    for_each_index(m, n, |idx| {
        let member = (0..m).all(|a| (a + 1..m).all(|b| pi.block_of(a) != pi.block_of(b) || idx[a] == idx[b]));
        if member {
            let args: Vec<&T> = idx.iter().map(|&i| sample.get(i)).collect();
            total += h(&args);
        }
    });
    Ok(total)
}
