use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Name of an operator acting on a module.
///
/// `T(l)` is the Hecke operator at a good prime, `Wp`/`Wq` the involutions at
/// the two primes of the level, and `U(r)` a Hecke operator at a bad prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    T(u64),
    Wp,
    Wq,
    U(u64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::T(l) => write!(f, "T{l}"),
            Label::Wp => f.write_str("w_p"),
            Label::Wq => f.write_str("w_q"),
            Label::U(r) => write!(f, "U{r}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "w_p" => Ok(Label::Wp),
            "w_q" => Ok(Label::Wq),
            _ => {
                let bad = || Error::parse("label", &format!("unknown operator label {s:?}"));
                if let Some(rest) = s.strip_prefix('T') {
                    rest.parse().map(Label::T).map_err(|_| bad())
                } else if let Some(rest) = s.strip_prefix('U') {
                    rest.parse().map(Label::U).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}
