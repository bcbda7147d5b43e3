use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeParam {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

/// The set of optimal probability vectors of one solution case.
///
/// Every weight is affine in the free parameters:
/// `w_i = base_i + sum_j coefficients[j][i] * param_j`, with each parameter
/// in its `[min, max]` box and, when `sum_cap` is set, the parameters summing
/// to at most `sum_cap`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightFamily {
    base: Vec<f64>,
    coefficients: Vec<Vec<f64>>,
    free_params: Vec<FreeParam>,
    sum_cap: Option<f64>,
}

impl WeightFamily {
    /// A single optimal weight vector.
    pub fn fixed(weights: Vec<f64>) -> Self {
        Self { base: weights, coefficients: Vec::new(), free_params: Vec::new(), sum_cap: None }
    }

    pub(crate) fn with_param(mut self, name: &str, max: f64, direction: Vec<f64>) -> Self {
        debug_assert_eq!(direction.len(), self.base.len());
        self.free_params.push(FreeParam { name: name.to_owned(), min: 0.0, max: max.max(0.0) });
        self.coefficients.push(direction);
        self
    }

    pub(crate) fn with_sum_cap(mut self, cap: f64) -> Self {
        self.sum_cap = Some(cap.max(0.0));
        self
    }

    /// Weights with every free parameter at zero.
    pub fn representative(&self) -> &[f64] {
        &self.base
    }

    pub fn free_params(&self) -> &[FreeParam] {
        &self.free_params
    }

    pub fn sum_cap(&self) -> Option<f64> {
        self.sum_cap
    }

    /// `(state index, base, coefficient per free parameter)` for each weight.
    pub fn affine_terms(&self) -> Vec<(usize, f64, Vec<f64>)> {
        self.base
            .iter()
            .enumerate()
            .map(|(i, b)| (i, *b, self.coefficients.iter().map(|c| c[i]).collect()))
            .collect()
    }

    pub fn is_admissible(&self, params: &[f64]) -> bool {
        let t = tolerances::SIMPLEX;
        params.len() == self.free_params.len()
            && params.iter().zip(&self.free_params).all(|(v, p)| *v >= p.min - t && *v <= p.max + t)
            && self.sum_cap.is_none_or(|cap| params.iter().sum::<f64>() <= cap + t)
    }

    /// Weights at an admissible parameter assignment.
    pub fn evaluate(&self, params: &[f64]) -> Result<Vec<f64>> {
        if params.len() != self.free_params.len() {
            return Err(Error::Arity { expected: self.free_params.len(), got: params.len() });
        }
        if !self.is_admissible(params) {
            return Err(Error::Contract(format!("free parameters {params:?} are outside the admissible region")));
        }
        let mut w = self.base.clone();
        for (dir, v) in self.coefficients.iter().zip(params) {
            for (wi, di) in w.iter_mut().zip(dir) {
                *wi += di * v;
            }
        }
        Ok(w)
    }

    /// Maps a point of the unit cube onto an admissible parameter assignment.
    pub fn params_from_unit(&self, unit: &[f64]) -> Vec<f64> {
        let mut params: Vec<f64> = self
            .free_params
            .iter()
            .zip(unit.iter().chain(std::iter::repeat(&0.0)))
            .map(|(p, u)| p.min + u.clamp(0.0, 1.0) * (p.max - p.min))
            .collect();
        if let Some(cap) = self.sum_cap {
            let total: f64 = params.iter().sum();
            if total > cap {
                let scale = if total > 0.0 { cap / total } else { 0.0 };
                params.iter_mut().for_each(|v| *v *= scale);
            }
        }
        params
    }
}
