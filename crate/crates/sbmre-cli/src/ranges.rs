//! Range flag syntax: `lo:hi:count` (linear), `lo:hi:countL` (log-spaced),
//! `lo:hi` (linear, 50 points), or a plain number for a single value.

use sbmre::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum RangeSpec {
    Scalar(f64),
    Linear { lo: f64, hi: f64, count: usize },
    Log { lo: f64, hi: f64, count: usize },
}

impl RangeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parameter(format!("range '{text}': {msg}"));
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| bad(&format!("'{s}' is not a number")))
        };
        match parts.as_slice() {
            [single] => Ok(RangeSpec::Scalar(num(single)?)),
            [lo, hi] => Ok(RangeSpec::Linear {
                lo: num(lo)?,
                hi: num(hi)?,
                count: 50,
            }),
            [lo, hi, count] => {
                let (count, log) = match count.strip_suffix(['L', 'l']) {
                    Some(c) => (c, true),
                    None => (*count, false),
                };
                let count: usize = count
                    .parse()
                    .map_err(|_| bad(&format!("'{count}' is not a point count")))?;
                if count < 1 {
                    return Err(bad("count must be at least 1"));
                }
                let (lo, hi) = (num(lo)?, num(hi)?);
                if !(hi > lo) && count > 1 {
                    return Err(bad("requires lo < hi"));
                }
                if log {
                    if !(lo > 0.0) {
                        return Err(bad("log spacing requires lo > 0"));
                    }
                    Ok(RangeSpec::Log { lo, hi, count })
                } else {
                    Ok(RangeSpec::Linear { lo, hi, count })
                }
            }
            _ => Err(bad("expected value, lo:hi, lo:hi:count, or lo:hi:countL")),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            RangeSpec::Scalar(v) => vec![v],
            RangeSpec::Linear { lo, hi, count } => {
                if count == 1 {
                    return vec![lo];
                }
                (0..count)
                    .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                    .collect()
            }
            RangeSpec::Log { lo, hi, count } => {
                if count == 1 {
                    return vec![lo];
                }
                (0..count)
                    .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(RangeSpec::parse("2.5").unwrap(), RangeSpec::Scalar(2.5));
        assert_eq!(
            RangeSpec::parse("0.1:5:50").unwrap(),
            RangeSpec::Linear {
                lo: 0.1,
                hi: 5.0,
                count: 50
            }
        );
        assert_eq!(
            RangeSpec::parse("1e2:1e6:40L").unwrap(),
            RangeSpec::Log {
                lo: 1e2,
                hi: 1e6,
                count: 40
            }
        );
        assert_eq!(
            RangeSpec::parse("1:10").unwrap(),
            RangeSpec::Linear {
                lo: 1.0,
                hi: 10.0,
                count: 50
            }
        );
        assert!(RangeSpec::parse("a:b").is_err());
        assert!(RangeSpec::parse("1:2:3:4").is_err());
        assert!(RangeSpec::parse("-1:2:5L").is_err());
        assert!(RangeSpec::parse("5:1:10").is_err());
    }

    #[test]
    fn value_grids() {
        let lin = RangeSpec::parse("0:1:5").unwrap().values();
        assert_eq!(lin, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = RangeSpec::parse("1:100:3L").unwrap().values();
        assert!((log[1] - 10.0).abs() < 1e-12);
        assert_eq!(RangeSpec::parse("4").unwrap().values(), vec![4.0]);
    }
}
