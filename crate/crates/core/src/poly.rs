use crate::exactnum::Rat;

/// Integer-coefficient polynomial, coefficients from the highest degree down.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IntPoly(pub &'static [i64]);

impl IntPoly {
    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, &c| acc * t + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner() {
        // t² - 6t + 1 at t = 6
        assert_eq!(IntPoly(&[1, -6, 1]).eval(&Rat::from(6)), Rat::from(1));
        assert_eq!(IntPoly(&[]).eval(&Rat::from(6)), Rat::zero());
        assert_eq!(IntPoly(&[2, 0, 0]).eval(&Rat::frac(1, 2)), Rat::frac(1, 2));
    }
}
