//! Classic fourth-order Runge–Kutta with a fixed step, shared by the
//! spectral and finite-difference solvers.

/// A first-order system y′ = f(t, y) over real components.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

/// Reusable RK4 workspace.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Rk4 {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            stage: vec![0.0; dim],
        }
    }

    /// Advances `y` from `t` to `t + h` in place.
    pub fn step<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, y: &mut [f64], h: f64) {
        debug_assert_eq!(y.len(), self.k1.len());
        let half = 0.5 * h;

        sys.rhs(t, y, &mut self.k1);
        for ((s, y), k) in self.stage.iter_mut().zip(y.iter()).zip(&self.k1) {
            *s = y + half * k;
        }
        sys.rhs(t + half, &self.stage, &mut self.k2);
        for ((s, y), k) in self.stage.iter_mut().zip(y.iter()).zip(&self.k2) {
            *s = y + half * k;
        }
        sys.rhs(t + half, &self.stage, &mut self.k3);
        for ((s, y), k) in self.stage.iter_mut().zip(y.iter()).zip(&self.k3) {
            *s = y + h * k;
        }
        sys.rhs(t + h, &self.stage, &mut self.k4);

        let sixth = h / 6.0;
        for (i, y) in y.iter_mut().enumerate() {
            *y += sixth * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }

    /// Advances `y` from `t0` to `t1` in `steps` equal steps.
    pub fn integrate<S: OdeSystem + ?Sized>(&mut self, sys: &S, t0: f64, t1: f64, y: &mut [f64], steps: usize) {
        let h = (t1 - t0) / steps as f64;
        for i in 0..steps {
            self.step(sys, t0 + i as f64 * h, y, h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Rotation(f64);

    impl OdeSystem for Rotation {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = -self.0 * y[1];
            dy[1] = self.0 * y[0];
        }
    }

    fn error_with(steps: usize) -> f64 {
        let sys = Rotation(3.0);
        let mut y = [1.0, 0.0];
        Rk4::new(2).integrate(&sys, 0.0, 1.0, &mut y, steps);
        ((y[0] - 3f64.cos()).powi(2) + (y[1] - 3f64.sin()).powi(2)).sqrt()
    }

    #[test]
    fn fourth_order_convergence() {
        let ratio = error_with(50) / error_with(100);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn time_dependent_quadrature() {
        struct Cubic;
        impl OdeSystem for Cubic {
            fn dim(&self) -> usize {
                1
            }
            fn rhs(&self, t: f64, _y: &[f64], dy: &mut [f64]) {
                dy[0] = 4.0 * t * t * t;
            }
        }
        let mut y = [0.0];
        Rk4::new(1).integrate(&Cubic, 0.0, 2.0, &mut y, 7);
        assert!((y[0] - 16.0).abs() < 1e-12);
    }
}
