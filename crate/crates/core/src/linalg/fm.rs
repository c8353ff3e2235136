//! Fourier–Motzkin elimination for systems of strict and non-strict linear
//! inequalities.

use crate::scalar::Scalar;

/// `coeffs · x < bound` when `strict`, `coeffs · x <= bound` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Inequality<T> {
    pub coeffs: Vec<T>,
    pub bound: T,
    pub strict: bool,
}

impl<T: Scalar> Inequality<T> {
    pub fn strict(coeffs: Vec<T>, bound: T) -> Self {
        Self {
            coeffs,
            bound,
            strict: true,
        }
    }

    pub fn non_strict(coeffs: Vec<T>, bound: T) -> Self {
        Self {
            coeffs,
            bound,
            strict: false,
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn holds_trivially(&self) -> bool {
        if self.strict {
            self.bound > T::zero()
        } else {
            self.bound >= T::zero()
        }
    }

    /// Divide by the magnitude of the leading coefficient so duplicates
    /// compare equal.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coeffs.iter_mut() {
                *c = c.clone() / lead.clone();
            }
            self.bound = self.bound / lead;
        }
        self
    }
}

/// Merge `incoming` into `set`, keeping only the tightest copy among
/// constraints with identical left-hand sides.
fn push_dedup<T: Scalar>(set: &mut Vec<Inequality<T>>, incoming: Inequality<T>) {
    let incoming = if T::EXACT { incoming.normalized() } else { incoming };
    if T::EXACT {
        if let Some(existing) = set.iter_mut().find(|e| e.coeffs == incoming.coeffs) {
            let tighter = incoming.bound < existing.bound
                || (incoming.bound == existing.bound && incoming.strict && !existing.strict);
            if tighter {
                *existing = incoming;
            }
            return;
        }
    }
    set.push(incoming);
}

/// Decide whether the system has a real solution in `nvars` unknowns.
pub fn is_feasible<T: Scalar>(nvars: usize, constraints: &[Inequality<T>]) -> bool {
    let mut system: Vec<Inequality<T>> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "inequality arity mismatch");
        push_dedup(&mut system, c.clone());
    }
    loop {
        let mut live = Vec::with_capacity(system.len());
        for c in system {
            if c.is_trivial() {
                if !c.holds_trivially() {
                    return false;
                }
            } else {
                live.push(c);
            }
        }
        if live.is_empty() {
            return true;
        }
        // Eliminate the variable producing the fewest combined rows.
        let var = (0..nvars)
            .filter(|&j| live.iter().any(|c| !c.coeffs[j].is_zero()))
            .min_by_key(|&j| {
                let pos = live.iter().filter(|c| c.coeffs[j].is_positive()).count();
                let neg = live.iter().filter(|c| c.coeffs[j].is_negative()).count();
                (pos * neg, j)
            })
            .expect("a live constraint has a nonzero coefficient");

        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut next = Vec::new();
        for c in live {
            let a = c.coeffs[var].clone();
            if a.is_zero() {
                push_dedup(&mut next, c);
            } else {
                let scale = a.abs();
                let scaled = Inequality {
                    coeffs: c.coeffs.iter().map(|x| x.clone() / scale.clone()).collect(),
                    bound: c.bound.clone() / scale,
                    strict: c.strict,
                };
                if a.is_positive() {
                    upper.push(scaled);
                } else {
                    lower.push(scaled);
                }
            }
        }
        for u in &upper {
            for l in &lower {
                let mut coeffs: Vec<T> = u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect();
                coeffs[var] = T::zero();
                push_dedup(
                    &mut next,
                    Inequality {
                        coeffs,
                        bound: u.bound.clone() + l.bound.clone(),
                        strict: u.strict || l.strict,
                    },
                );
            }
        }
        system = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Rational;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn open_interval_feasibility() {
        // 0 < x < 1
        let sys = [
            Inequality::strict(v(&[-1]), int(0)),
            Inequality::strict(v(&[1]), int(1)),
        ];
        assert!(is_feasible(1, &sys));
        // x < 0 and x > 0
        let sys = [
            Inequality::strict(v(&[1]), int(0)),
            Inequality::strict(v(&[-1]), int(0)),
        ];
        assert!(!is_feasible(1, &sys));
        // x <= 0 and x >= 0 is a point
        let sys = [
            Inequality::non_strict(v(&[1]), int(0)),
            Inequality::non_strict(v(&[-1]), int(0)),
        ];
        assert!(is_feasible(1, &sys));
    }

    #[test]
    fn triangle_in_plane() {
        // x > 0, y > 0, x + y < 1
        let sys = [
            Inequality::strict(v(&[-1, 0]), int(0)),
            Inequality::strict(v(&[0, -1]), int(0)),
            Inequality::strict(v(&[1, 1]), int(1)),
        ];
        assert!(is_feasible(2, &sys));
        // x > 0, y > 0, x + y < 0
        let sys = [
            Inequality::strict(v(&[-1, 0]), int(0)),
            Inequality::strict(v(&[0, -1]), int(0)),
            Inequality::strict(v(&[1, 1]), int(0)),
        ];
        assert!(!is_feasible(2, &sys));
    }

    #[test]
    fn empty_system_and_zero_rows() {
        assert!(is_feasible::<Rational>(3, &[]));
        assert!(!is_feasible(0, &[Inequality::strict(vec![], int(0))]));
        assert!(is_feasible(0, &[Inequality::non_strict(vec![], int(0))]));
    }
}
