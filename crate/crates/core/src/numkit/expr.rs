//! Iterated logistic-map expressions evaluated over intervals without
//! expanding them into polynomials.

use super::{Precision, RatInterval, Rational};

/// Which quantity is the free variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    /// The variable is the parameter `r`; the orbit starts at `base`.
    Parameter { base: Rational },
    /// The variable is the state `x`; the parameter is fixed.
    State { param: Rational },
}

/// Whether the start point is subtracted from the final iterate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// `f^n(start) - start`
    Defect,
    /// `f^n(start)`
    Value,
}

/// `t ↦ f_r^n(x0) - x0` (parameter role) or `t ↦ f_d^n(x) - x` (state role),
/// with `f_r(x) = r x (1 - x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterMapExpr {
    role: Role,
    iterations: u32,
    form: Form,
}

/// Value and derivative enclosures over a common input box.
#[derive(Clone, Debug)]
pub struct Jet {
    pub value: RatInterval,
    pub deriv: RatInterval,
}

impl IterMapExpr {
    /// `P_p(r) = f_r^p(1/2) - 1/2`, whose roots are the superattracting
    /// parameters of period dividing `p`.
    pub fn critical_return(period: u32) -> Self {
        Self::parameter(period, Rational::half())
    }

    pub fn parameter(iterations: u32, base: Rational) -> Self {
        assert!(iterations >= 1, "iteration count must be positive");
        IterMapExpr {
            role: Role::Parameter { base },
            iterations,
            form: Form::Defect,
        }
    }

    /// `x ↦ f_d^p(x) - x`, whose roots are the points of period dividing `p`.
    pub fn periodic_defect(param: Rational, iterations: u32) -> Self {
        assert!(iterations >= 1, "iteration count must be positive");
        IterMapExpr {
            role: Role::State { param },
            iterations,
            form: Form::Defect,
        }
    }

    pub fn with_form(mut self, form: Form) -> Self {
        self.form = form;
        self
    }

    pub fn role(&self) -> &Role {
        &self.role
    }

    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Natural domain of the free variable.
    pub fn domain(&self) -> RatInterval {
        match self.role {
            Role::Parameter { .. } => {
                RatInterval::new(Rational::zero(), Rational::int(4)).expect("ordered")
            }
            Role::State { .. } => RatInterval::unit(),
        }
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, t: &Rational) -> Rational {
        let v = self.eval(&RatInterval::point(t.clone()), Precision::Exact);
        debug_assert!(v.is_point());
        v.lo().clone()
    }

    /// Natural interval extension: contains the range of the expression over
    /// `input`, is inclusion monotone, and is exact on point inputs when
    /// `prec` is `Exact`.
    pub fn eval(&self, input: &RatInterval, prec: Precision) -> RatInterval {
        let (mut x, r, start) = match &self.role {
            Role::Parameter { base } => (
                RatInterval::point(base.clone()),
                input.clone(),
                RatInterval::point(base.clone()),
            ),
            Role::State { param } => (
                input.clone(),
                RatInterval::point(param.clone()),
                input.clone(),
            ),
        };
        for _ in 0..self.iterations {
            x = r.mul(&x.logistic_core()).rounded(prec);
        }
        match self.form {
            Form::Defect => x.sub(&start).rounded(prec),
            Form::Value => x,
        }
    }

    /// Value and derivative with respect to the free variable, evaluated
    /// together by forward-mode differentiation over intervals.
    pub fn eval_jet(&self, input: &RatInterval, prec: Precision) -> Jet {
        let one = RatInterval::point(Rational::one());
        let two = Rational::int(2);
        let (mut x, mut dx, r, start, dstart) = match &self.role {
            Role::Parameter { base } => (
                RatInterval::point(base.clone()),
                RatInterval::point(Rational::zero()),
                input.clone(),
                RatInterval::point(base.clone()),
                RatInterval::point(Rational::zero()),
            ),
            Role::State { param } => (
                input.clone(),
                one.clone(),
                RatInterval::point(param.clone()),
                input.clone(),
                one.clone(),
            ),
        };
        let param_role = matches!(self.role, Role::Parameter { .. });
        for _ in 0..self.iterations {
            let g = x.logistic_core();
            // d/dt [r g(x)] = [dr/dt] g(x) + r (1 - 2x) dx/dt
            let gp = one.sub(&x.mul_scalar(&two));
            let chain = r.mul(&gp).mul(&dx);
            let ndx = if param_role { g.add(&chain) } else { chain };
            x = r.mul(&g).rounded(prec);
            dx = ndx.rounded(prec);
        }
        match self.form {
            Form::Defect => Jet {
                value: x.sub(&start).rounded(prec),
                deriv: dx.sub(&dstart).rounded(prec),
            },
            Form::Value => Jet { value: x, deriv: dx },
        }
    }

    /// Tighter enclosure: natural extension intersected with the mean-value
    /// form around the midpoint. Not inclusion monotone.
    pub fn eval_tight(&self, input: &RatInterval, prec: Precision) -> RatInterval {
        let jet = self.eval_jet(input, prec);
        if input.is_point() {
            return jet.value;
        }
        let m = input.mid();
        let at_mid = self.eval(&RatInterval::point(m.clone()), prec);
        let centered = at_mid
            .add(&jet.deriv.mul(&input.add_scalar(&-m)))
            .rounded(prec);
        jet.value.intersection(&centered).unwrap_or(centered)
    }

    /// Sign at a rational point, escalating precision and finally falling
    /// back to exact evaluation.
    pub fn sign_at(&self, t: &Rational, start_bits: u32) -> i32 {
        let p = RatInterval::point(t.clone());
        let mut bits = start_bits.max(32);
        // exact evaluation doubles the size of the value per iteration, so
        // rounded passes are tried first
        while bits <= 4096 {
            if let Some(s) = self.eval(&p, Precision::Bits(bits)).sign() {
                return s;
            }
            bits *= 4;
        }
        self.eval_exact(t).signum()
    }
}
