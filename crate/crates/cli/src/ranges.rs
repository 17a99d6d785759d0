//! Parsing of value lists such as `3`, `2,3`, `2..4` or `2..4,7`.

use std::str::FromStr;

/// Sorted, de-duplicated list of values; `a..b` is inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueList<T>(pub Vec<T>);

impl<T> ValueList<T> {
    pub fn values(&self) -> &[T] {
        &self.0
    }
}

impl<T> FromStr for ValueList<T>
where
    T: FromStr + Ord + Copy + TryFrom<u64> + Into<u64>,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |p: &str| -> Result<T, String> {
            p.trim().parse::<T>().map_err(|_| format!("not a non-negative integer: {p:?}"))
        };
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            if part.is_empty() {
                return Err(format!("empty item in list {s:?}"));
            }
            match part.split_once("..") {
                Some((lo, hi)) => {
                    let (lo, hi) = (parse(lo)?, parse(hi)?);
                    if lo > hi {
                        return Err(format!("empty range {part:?}"));
                    }
                    for v in lo.into()..=hi.into() {
                        out.push(T::try_from(v).map_err(|_| format!("value out of range in {part:?}"))?);
                    }
                }
                None => out.push(parse(part)?),
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(ValueList(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!("3".parse::<ValueList<u32>>().unwrap().0, vec![3]);
        assert_eq!("2,3".parse::<ValueList<u32>>().unwrap().0, vec![2, 3]);
        assert_eq!("2..4".parse::<ValueList<u32>>().unwrap().0, vec![2, 3, 4]);
        assert_eq!("7, 2..3,3".parse::<ValueList<u64>>().unwrap().0, vec![2, 3, 7]);
    }

    #[test]
    fn rejects() {
        for bad in ["", "a", "4..2", "1,,2", "-1", "1..x"] {
            assert!(bad.parse::<ValueList<u32>>().is_err(), "{bad}");
        }
    }
}
