//! Exact approximation parameters.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// An approximation parameter ε > 0 as an exact fraction.
pub type Eps = Ratio<u64>;

/// Parses a decimal (`0.25`), a fraction (`1/4`) or an integer.
pub fn parse_eps(text: &str) -> Result<Eps> {
    let bad = || Error::Invalid(format!("cannot read `{text}` as a positive number"));
    let text = text.trim();
    let eps = if let Some((a, b)) = text.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        Ratio::new(a, b)
    } else {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10u64.pow(frac.len() as u32);
        let num = if frac.is_empty() { 0 } else { frac.parse::<u64>().map_err(|_| bad())? };
        Ratio::new(int.checked_mul(den).and_then(|x| x.checked_add(num)).ok_or_else(bad)?, den)
    };
    check_eps(eps)?;
    Ok(eps)
}

pub fn check_eps(eps: Eps) -> Result<()> {
    if *eps.numer() == 0 {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_eps("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_eps("1/3").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_eps("2").unwrap(), Ratio::from_integer(2));
        assert!(parse_eps("0").is_err());
        assert!(parse_eps("-1").is_err());
        assert!(parse_eps("abc").is_err());
    }
}
