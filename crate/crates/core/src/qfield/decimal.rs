use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::{QuadExpr, Rational};

fn pow10(e: i64) -> Rational {
    let ten = BigInt::from(10);
    if e >= 0 {
        Rational::from_integer(num_traits::pow(ten, e as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(ten, (-e) as usize))
    }
}

impl QuadExpr {
    /// Positional decimal rendering with exactly `sig` significant digits,
    /// rounded to nearest with ties to even. All rounding decisions are exact.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig > 0);
        let sign = self.sign();
        if sign == Ordering::Equal {
            return "0".to_string();
        }
        let abs = if sign == Ordering::Less { self.neg() } else { self.clone() };

        // 10^e <= abs < 10^(e+1)
        let est = abs.to_f64();
        let mut e = if est.is_finite() && est > 0.0 { est.log10().floor() as i64 } else { 0 };
        while abs < QuadExpr::rational(pow10(e)) {
            e -= 1;
        }
        while abs >= QuadExpr::rational(pow10(e + 1)) {
            e += 1;
        }

        let scaled = abs.scale(&pow10(sig as i64 - 1 - e));
        let mut digits = scaled.floor();
        let rem = scaled.add_rational(&-Rational::from_integer(digits.clone()));
        match rem.cmp(&QuadExpr::rational(Rational::new(BigInt::one(), BigInt::from(2)))) {
            Ordering::Greater => digits += 1,
            Ordering::Equal if digits.is_odd() => digits += 1,
            _ => {}
        }
        if digits == num_traits::pow(BigInt::from(10), sig) {
            digits = num_traits::pow(BigInt::from(10), sig - 1);
            e += 1;
        }

        let ds = digits.to_string();
        debug_assert_eq!(ds.len(), sig);
        let mut out = String::new();
        if sign == Ordering::Less {
            out.push('-');
        }
        if e >= 0 {
            let int_len = e as usize + 1;
            if int_len >= sig {
                out.push_str(&ds);
                out.extend(std::iter::repeat_n('0', int_len - sig));
            } else {
                out.push_str(&ds[..int_len]);
                out.push('.');
                out.push_str(&ds[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&ds);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratio;

    #[test]
    fn irrational_rendering() {
        let a = QuadExpr::term(ratio(1, 4), 2).unwrap();
        assert_eq!(a.to_decimal(30), "0.353553390593273762200422181052");
        assert_eq!(QuadExpr::sqrt(2).unwrap().neg().to_decimal(5), "-1.4142");
        assert_eq!(QuadExpr::sqrt(2).unwrap().scale(&ratio(1000, 1)).to_decimal(3), "1410");
    }

    #[test]
    fn ties_go_to_even() {
        assert_eq!(QuadExpr::rational(ratio(125, 1000)).to_decimal(2), "0.12");
        assert_eq!(QuadExpr::rational(ratio(135, 1000)).to_decimal(2), "0.14");
        assert_eq!(QuadExpr::rational(ratio(995, 1)).to_decimal(2), "1000");
        assert_eq!(QuadExpr::rational(ratio(1, 4)).to_decimal(4), "0.2500");
        assert_eq!(QuadExpr::zero().to_decimal(4), "0");
    }
}
