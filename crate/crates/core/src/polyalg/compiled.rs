use super::FPoly;

/// Flattened float polynomial for repeated evaluation in inner loops.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    coeffs: Vec<f64>,
    /// `coeffs.len() * nvars` exponents, row per term.
    exps: Vec<u32>,
    max_exp: Vec<u32>,
}

impl CompiledPoly {
    pub fn new(p: &FPoly) -> Self {
        let nvars = p.nvars();
        let mut coeffs = Vec::with_capacity(p.num_terms());
        let mut exps = Vec::with_capacity(p.num_terms() * nvars);
        let mut max_exp = vec![0; nvars];
        for (m, c) in p.terms() {
            coeffs.push(*c);
            for (i, &e) in m.exps().iter().enumerate() {
                exps.push(e);
                max_exp[i] = max_exp[i].max(e);
            }
        }
        CompiledPoly { nvars, coeffs, exps, max_exp }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn power_table(&self, x: &[f64]) -> Vec<Vec<f64>> {
        x.iter()
            .zip(&self.max_exp)
            .map(|(&xi, &d)| {
                let mut row = Vec::with_capacity(d as usize + 1);
                row.push(1.0);
                for k in 1..=d as usize {
                    row.push(row[k - 1] * xi);
                }
                row
            })
            .collect()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        let pw = self.power_table(x);
        self.coeffs
            .iter()
            .zip(self.exps.chunks_exact(self.nvars.max(1)))
            .map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * pw[i][k as usize]))
            .sum()
    }

    /// Value and gradient in one pass; `grad` is overwritten.
    pub fn value_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        let pw = self.power_table(x);
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut value = 0.0;
        if self.nvars == 0 {
            return self.coeffs.iter().sum();
        }
        for (c, e) in self.coeffs.iter().zip(self.exps.chunks_exact(self.nvars)) {
            value += e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * pw[i][k as usize]);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut t = *c * k as f64 * pw[i][k as usize - 1];
                for (j, &kj) in e.iter().enumerate() {
                    if j != i {
                        t *= pw[j][kj as usize];
                    }
                }
                grad[i] += t;
            }
        }
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Poly;

    #[test]
    fn matches_symbolic_gradient() {
        let p = Poly::from_terms(3, [(1.5, vec![3, 1, 0]), (-2.0, vec![0, 2, 2]), (0.25, vec![1, 1, 1])]).unwrap();
        let c = CompiledPoly::new(&p);
        let x = [0.3, -1.2, 0.7];
        let mut g = [0.0; 3];
        let v = c.value_grad(&x, &mut g);
        assert!((v - p.evaluate(&x)).abs() < 1e-14);
        assert!((c.value(&x) - v).abs() < 1e-14);
        for (i, d) in p.gradient().iter().enumerate() {
            assert!((g[i] - d.evaluate(&x)).abs() < 1e-13);
        }
    }
}
