use super::{BinOp, Expression, Func};

use Expression as E;

fn mul(a: E, b: E) -> E {
    E::binary(BinOp::Mul, a, b)
}

fn add(a: E, b: E) -> E {
    E::binary(BinOp::Add, a, b)
}

fn sub(a: E, b: E) -> E {
    E::binary(BinOp::Sub, a, b)
}

fn div(a: E, b: E) -> E {
    E::binary(BinOp::Div, a, b)
}

fn pow(a: E, b: E) -> E {
    E::binary(BinOp::Pow, a, b)
}

impl Expression {
    /// Symbolic d/dx, simplified. Parameters are constants.
    pub fn differentiate(&self) -> Expression {
        self.derivative().simplify()
    }

    /// The `order`-th derivative, simplifying after every step.
    pub fn nth_derivative(&self, order: usize) -> Expression {
        let mut e = self.clone();
        for _ in 0..order {
            e = e.differentiate();
        }
        e
    }

    fn derivative(&self) -> Expression {
        match self {
            E::Const(_) | E::Param(_) => E::Const(0.0),
            E::Var => E::Const(1.0),
            E::Neg(a) => E::neg(a.derivative()),
            E::Binary(op, a, b) => {
                let (u, v) = (a.as_ref().clone(), b.as_ref().clone());
                match op {
                    BinOp::Add => add(a.derivative(), b.derivative()),
                    BinOp::Sub => sub(a.derivative(), b.derivative()),
                    BinOp::Mul => add(mul(a.derivative(), v), mul(u, b.derivative())),
                    BinOp::Div => div(
                        sub(mul(a.derivative(), v.clone()), mul(u, b.derivative())),
                        pow(v, E::Const(2.0)),
                    ),
                    BinOp::Pow => {
                        if !v.depends_on_x() {
                            // v * u^(v-1) * u'
                            mul(
                                mul(v.clone(), pow(u, sub(v, E::Const(1.0)))),
                                a.derivative(),
                            )
                        } else if !u.depends_on_x() {
                            // u^v * log(u) * v'
                            mul(
                                mul(pow(u.clone(), v), E::call(Func::Log, u)),
                                b.derivative(),
                            )
                        } else {
                            // u^v * (v' log(u) + v u'/u)
                            mul(
                                pow(u.clone(), v.clone()),
                                add(
                                    mul(b.derivative(), E::call(Func::Log, u.clone())),
                                    div(mul(v, a.derivative()), u),
                                ),
                            )
                        }
                    }
                }
            }
            E::Call(f, a) => {
                let u = a.as_ref().clone();
                let outer = match f {
                    Func::Sinh => E::call(Func::Cosh, u),
                    Func::Cosh => E::call(Func::Sinh, u),
                    Func::Tanh => sub(E::Const(1.0), pow(E::call(Func::Tanh, u), E::Const(2.0))),
                    Func::Exp => E::call(Func::Exp, u),
                    Func::Sqrt => div(E::Const(0.5), E::call(Func::Sqrt, u)),
                    Func::Sin => E::call(Func::Cos, u),
                    Func::Cos => E::neg(E::call(Func::Sin, u)),
                    Func::Log => div(E::Const(1.0), u),
                };
                mul(a.derivative(), outer)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{parse, ParameterBindings};

    fn central_fd(e: &crate::expr::Expression, x: f64, b: &ParameterBindings, h: f64) -> f64 {
        (e.evaluate(x + h, b).unwrap() - e.evaluate(x - h, b).unwrap()) / (2.0 * h)
    }

    #[test]
    fn power_rule() {
        assert_eq!(parse("x^3").unwrap().differentiate(), parse("3*x^2").unwrap());
    }

    #[test]
    fn chain_rule() {
        assert_eq!(
            parse("sinh(alpha*x)").unwrap().differentiate(),
            parse("alpha*cosh(alpha*x)").unwrap()
        );
    }

    #[test]
    fn linear_term_collapses_to_coefficient() {
        assert_eq!(parse("a*x").unwrap().differentiate(), parse("a").unwrap());
    }

    #[test]
    fn algebraic_sqrt_seed_slope_at_origin() {
        let e = parse("A*x/sqrt(b^2+x^2)").unwrap();
        let b = ParameterBindings::new().with("A", 3.0).with("b", 1.0);
        let d = e.differentiate().evaluate(0.0, &b).unwrap();
        let fd = central_fd(&e, 0.0, &b, 1e-6);
        assert!((fd - 3.0).abs() < 1e-8, "fd = {fd}");
        assert!((d - 3.0).abs() < 1e-14, "d = {d}");
    }

    #[test]
    fn every_function_matches_finite_difference() {
        let b = ParameterBindings::new();
        for src in [
            "sinh(2*x)",
            "cosh(x^2)",
            "tanh(3*x)",
            "exp(-x)",
            "sqrt(1+x^2)",
            "sin(x)*cos(x)",
            "log(2+x)",
            "x^x",
            "2^x",
            "x/(1+x^2)",
            "-x^3",
        ] {
            let e = parse(src).unwrap();
            let d = e.differentiate();
            for x in [0.3, 0.9, 1.7] {
                let exact = d.evaluate(x, &b).unwrap();
                let fd = central_fd(&e, x, &b, 1e-6);
                assert!(
                    (exact - fd).abs() <= 1e-7 * exact.abs().max(1.0),
                    "{src} at {x}: {exact} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn third_derivative_of_sinh() {
        let e = parse("sinh(2*x)").unwrap();
        let d3 = e.nth_derivative(3);
        assert!((d3.eval(0.4).unwrap() - 8.0 * (0.8f64).cosh()).abs() < 1e-12);
    }
}
