use std::fmt;
use std::sync::Arc;

use super::StatError;
use crate::tensor::Signature;

/// A sample of observations `X_0, ..., X_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    points: Vec<T>,
}

impl<T> Sample<T> {
    pub fn new(points: Vec<T>) -> Result<Self, StatError> {
        if points.is_empty() {
            return Err(StatError::SampleTooSmall { n: 0, needed: 1 });
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &T {
        &self.points[i]
    }
}

type ComponentFn<T> = dyn Fn(&[&T]) -> Result<f64, String> + Send + Sync;

/// One factor of a decomposable kernel.
pub struct Component<T> {
    arity: usize,
    f: Arc<ComponentFn<T>>,
}

impl<T> Clone for Component<T> {
    fn clone(&self) -> Self {
        Self { arity: self.arity, f: Arc::clone(&self.f) }
    }
}

impl<T> fmt::Debug for Component<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Component").field("arity", &self.arity).finish_non_exhaustive()
    }
}

impl<T> Component<T> {
    pub fn new(arity: usize, f: impl Fn(&[&T]) -> f64 + Send + Sync + 'static) -> Self {
        Self { arity, f: Arc::new(move |x| Ok(f(x))) }
    }

    pub fn fallible(arity: usize, f: impl Fn(&[&T]) -> Result<f64, String> + Send + Sync + 'static) -> Self {
        Self { arity, f: Arc::new(f) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[&T]) -> Result<f64, String> {
        if args.len() != self.arity {
            return Err(format!("expected {} arguments, got {}", self.arity, args.len()));
        }
        (self.f)(args)
    }

    pub(crate) fn eval_at(
        &self,
        component: usize,
        idx: &[usize],
        sample: &Sample<T>,
        strict: bool,
    ) -> Result<f64, StatError> {
        let args: Vec<&T> = idx.iter().map(|&i| sample.get(i)).collect();
        let fail =
            |message: String| StatError::ComponentEvaluation { component, indices: idx.to_vec(), message };
        let v = self.eval(&args).map_err(fail)?;
        if strict && !v.is_finite() {
            return Err(fail(format!("non-finite value {v}")));
        }
        Ok(v)
    }
}

/// Kernel `h(x_0..x_{m-1}) = prod_k h_k(x restricted to tuple k)`.
#[derive(Clone, Debug)]
pub struct MdKernel<T> {
    signature: Signature,
    components: Vec<Component<T>>,
}

impl<T> MdKernel<T> {
    pub fn new(signature: Signature, components: Vec<Component<T>>) -> Result<Self, StatError> {
        if components.len() != signature.len() {
            return Err(StatError::DimensionMismatch(format!(
                "{} components for {} signature tuples",
                components.len(),
                signature.len()
            )));
        }
        for (k, (c, t)) in components.iter().zip(signature.tuples()).enumerate() {
            if c.arity() != t.len() {
                return Err(StatError::ArityMismatch { component: k, expected: t.len(), got: c.arity() });
            }
        }
        Ok(Self { signature, components })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn components(&self) -> &[Component<T>] {
        &self.components
    }

    /// Kernel order `m`.
    pub fn order(&self) -> usize {
        self.signature.arity()
    }

    /// Evaluate the full product at one argument tuple.
    pub fn evaluate(&self, args: &[&T]) -> Result<f64, StatError> {
        if args.len() != self.order() {
            return Err(StatError::DimensionMismatch(format!(
                "kernel of order {} called with {} arguments",
                self.order(),
                args.len()
            )));
        }
        let mut prod = 1.0;
        for (k, (c, t)) in self.components.iter().zip(self.signature.tuples()).enumerate() {
            let sub: Vec<&T> = t.iter().map(|&i| args[i]).collect();
            prod *= c.eval(&sub).map_err(|message| StatError::ComponentEvaluation {
                component: k,
                indices: t.clone(),
                message,
            })?;
        }
        Ok(prod)
    }
}
