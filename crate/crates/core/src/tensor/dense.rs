use super::{check_cap, entry_count, TensorError};

/// Default ceiling on the number of entries of any single tensor.
pub const DEFAULT_MEM_CAP: u64 = 1 << 31;

/// Row-major dense tensor with every axis of the same extent.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    order: usize,
    extent: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(order: usize, extent: usize, data: Vec<f64>) -> Result<Self, TensorError> {
        if order > 0 && extent == 0 {
            return Err(TensorError::ShapeMismatch("extent must be positive".into()));
        }
        let expected = entry_count(order, extent);
        if data.len() as u128 != expected {
            return Err(TensorError::ShapeMismatch(format!(
                "order {order} extent {extent} needs {expected} entries, got {}",
                data.len()
            )));
        }
        Ok(Self { order, extent, data })
    }

    pub fn scalar(value: f64) -> Self {
        Self { order: 0, extent: 1, data: vec![value] }
    }

    pub fn zeros(order: usize, extent: usize, cap: u64) -> Result<Self, TensorError> {
        let len = check_cap(order, extent, cap)?;
        Self::new(order, extent, vec![0.0; len])
    }

    pub fn from_fn(
        order: usize,
        extent: usize,
        cap: u64,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self, TensorError> {
        let len = check_cap(order, extent, cap)?;
        let mut data = Vec::with_capacity(len);
        for_each_index(order, extent, |idx| data.push(f(idx)));
        Self::new(order, extent, data)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Value of an order-0 tensor.
    pub fn scalar_value(&self) -> Option<f64> {
        (self.order == 0).then(|| self.data[0])
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.order, "index arity");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.extent, "index {i} out of range");
            acc * self.extent + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }
}

/// Materialize `f` over `[extent]^order`.
pub fn tensor_from_function(
    order: usize,
    extent: usize,
    cap: u64,
    f: impl FnMut(&[usize]) -> f64,
) -> Result<DenseTensor, TensorError> {
    DenseTensor::from_fn(order, extent, cap, f)
}

/// Visit every index tuple of `[extent]^order` in row-major order.
pub fn for_each_index(order: usize, extent: usize, mut f: impl FnMut(&[usize])) {
    if order > 0 && extent == 0 {
        return;
    }
    let mut idx = vec![0usize; order];
    loop {
        f(&idx);
        let mut p = order;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < extent {
                break;
            }
            idx[p] = 0;
        }
    }
}
