use super::{BinOp, Expression};

use Expression as E;

fn is_const(e: &E, c: f64) -> bool {
    matches!(e, E::Const(v) if *v == c)
}

impl Expression {
    /// Constant folding plus the identities `x+0`, `x-0`, `0-x`, `x*1`, `x*0`, `x/1`, `0/x`,
    /// `x^1`, `x^0` and `--x`, applied bottom-up until nothing changes.
    ///
    /// Folding only happens when the folded value is finite and in-domain, so a
    /// simplified tree evaluates to the same value wherever the original is defined.
    pub fn simplify(&self) -> Expression {
        let mut cur = self.clone();
        loop {
            let next = cur.simplify_pass();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn simplify_pass(&self) -> Expression {
        match self {
            E::Const(_) | E::Var | E::Param(_) => self.clone(),
            E::Neg(a) => match a.simplify_pass() {
                E::Const(c) => E::Const(-c),
                E::Neg(inner) => *inner,
                a => E::neg(a),
            },
            E::Call(f, a) => {
                let a = a.simplify_pass();
                if let E::Const(c) = a {
                    if let Ok(v) = f.apply(c) {
                        return E::Const(v);
                    }
                }
                E::call(*f, a)
            }
            E::Binary(op, a, b) => {
                let a = a.simplify_pass();
                let b = b.simplify_pass();
                if let (E::Const(x), E::Const(y)) = (&a, &b) {
                    if let Ok(v) = op.apply(*x, *y) {
                        return E::Const(v);
                    }
                }
                match op {
                    BinOp::Add if is_const(&a, 0.0) => b,
                    BinOp::Add | BinOp::Sub if is_const(&b, 0.0) => a,
                    BinOp::Sub if is_const(&a, 0.0) => E::neg(b),
                    BinOp::Mul if is_const(&a, 0.0) || is_const(&b, 0.0) => E::Const(0.0),
                    BinOp::Mul if is_const(&a, 1.0) => b,
                    BinOp::Mul | BinOp::Div if is_const(&b, 1.0) => a,
                    BinOp::Mul => fold_constant_factors(a, b),
                    BinOp::Div if is_const(&a, 0.0) && !is_const(&b, 0.0) => E::Const(0.0),
                    BinOp::Pow if is_const(&b, 1.0) => a,
                    BinOp::Pow if is_const(&b, 0.0) => E::Const(1.0),
                    _ => E::binary(*op, a, b),
                }
            }
        }
    }
}

/// `c1 * (c2 * e)` and `(c1 * e) * c2` become `(c1*c2) * e`; keeps derivative trees small.
fn fold_constant_factors(a: E, b: E) -> E {
    match (a, b) {
        (E::Const(c1), E::Binary(BinOp::Mul, l, r)) if const_product(c1, &l).is_some() => {
            E::binary(BinOp::Mul, E::Const(const_product(c1, &l).unwrap()), *r)
        }
        (E::Binary(BinOp::Mul, l, r), E::Const(c2)) if const_product(c2, &l).is_some() => {
            E::binary(BinOp::Mul, E::Const(const_product(c2, &l).unwrap()), *r)
        }
        (a, E::Const(c)) if !matches!(a, E::Const(_)) => E::binary(BinOp::Mul, E::Const(c), a),
        (a, b) => E::binary(BinOp::Mul, a, b),
    }
}

fn const_product(c: f64, e: &E) -> Option<f64> {
    match e {
        E::Const(d) if (c * d).is_finite() => Some(c * d),
        _ => None,
    }
}
