use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The irreducible families of the degree table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFamily {
    A(u32),
    B(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
    H3,
    H4,
    I2(u32),
}

impl fmt::Display for TableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableFamily::A(n) => write!(f, "A{n}"),
            TableFamily::B(n) => write!(f, "B{n}"),
            TableFamily::D(n) => write!(f, "D{n}"),
            TableFamily::E6 => write!(f, "E6"),
            TableFamily::E7 => write!(f, "E7"),
            TableFamily::E8 => write!(f, "E8"),
            TableFamily::F4 => write!(f, "F4"),
            TableFamily::G2 => write!(f, "G2"),
            TableFamily::H3 => write!(f, "H3"),
            TableFamily::H4 => write!(f, "H4"),
            TableFamily::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl TableFamily {
    /// `name` is one of `A B D E F G H I2` (case-insensitive) or a full
    /// label such as `E6`; `rank` supplies the missing parameter.
    pub fn parse(name: &str, rank: Option<u32>) -> Result<TableFamily> {
        let upper = name.trim().to_ascii_uppercase();
        let need = |r: Option<u32>| r.ok_or_else(|| Error::Parse(format!("family {name} needs a rank")));
        let fam = match upper.as_str() {
            "A" | "SYM" => TableFamily::A(need(rank)?),
            "B" => TableFamily::B(need(rank)?),
            "D" => TableFamily::D(need(rank)?),
            "I2" | "I" => TableFamily::I2(need(rank)?),
            "E" => match need(rank)? {
                6 => TableFamily::E6,
                7 => TableFamily::E7,
                8 => TableFamily::E8,
                r => return Err(Error::RankOutOfRange { family: "E".into(), rank: r as usize }),
            },
            "F" | "F4" => TableFamily::F4,
            "G" | "G2" => TableFamily::G2,
            "H" => match need(rank)? {
                3 => TableFamily::H3,
                4 => TableFamily::H4,
                r => return Err(Error::RankOutOfRange { family: "H".into(), rank: r as usize }),
            },
            "E6" => TableFamily::E6,
            "E7" => TableFamily::E7,
            "E8" => TableFamily::E8,
            "H3" => TableFamily::H3,
            "H4" => TableFamily::H4,
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        };
        Ok(fam)
    }
}

impl FromStr for TableFamily {
    type Err = Error;

    /// Accepts labels such as `A3`, `E8`, `I2(5)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m = inner.parse().map_err(|_| Error::Parse(format!("bad label '{s}'")))?;
            return TableFamily::parse("I2", Some(m));
        }
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (name, num) = s.split_at(split);
        let rank = if num.is_empty() {
            None
        } else {
            Some(num.parse().map_err(|_| Error::Parse(format!("bad label '{s}'")))?)
        };
        TableFamily::parse(name, rank)
    }
}

/// One row of the degree table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRow {
    pub label: String,
    pub degrees: Vec<u32>,
    pub two_dn: u32,
    /// `max(2 d_n, 2 (o_lo + o_hi))`.
    pub thmb_bound: u32,
    pub o_lo: u32,
    pub o_hi: u32,
}

pub(crate) fn odd_extremes(degrees: &[u32]) -> (u32, u32) {
    let mut odd = degrees.iter().copied().filter(|d| d % 2 == 1);
    match odd.next() {
        None => (1, 1),
        Some(first) => odd.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))),
    }
}

impl DegreeRow {
    pub fn from_degrees(label: impl Into<String>, mut degrees: Vec<u32>) -> DegreeRow {
        degrees.sort_unstable();
        let dn = *degrees.last().expect("at least one degree");
        let (o_lo, o_hi) = odd_extremes(&degrees);
        DegreeRow { label: label.into(), two_dn: 2 * dn, thmb_bound: (2 * dn).max(2 * (o_lo + o_hi)), o_lo, o_hi, degrees }
    }

    pub fn group_order(&self) -> u64 {
        self.degrees.iter().map(|&d| u64::from(d)).product()
    }
}

impl fmt::Display for DegreeRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degs: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        write!(f, "degrees: {} | 2dn: {} | thmB-bound: {}", degs.join(" "), self.two_dn, self.thmb_bound)
    }
}

/// Degree data of an irreducible reflection group.
pub fn degree_table(family: TableFamily) -> Result<DegreeRow> {
    let range = |name: &str, r: u32| Error::RankOutOfRange { family: name.into(), rank: r as usize };
    let degrees: Vec<u32> = match family {
        TableFamily::A(n) if n >= 1 => (2..=n + 1).collect(),
        TableFamily::A(n) => return Err(range("A", n)),
        TableFamily::B(n) if n >= 2 => (1..=n).map(|i| 2 * i).collect(),
        TableFamily::B(n) => return Err(range("B", n)),
        TableFamily::D(n) if n >= 3 => (1..n).map(|i| 2 * i).chain([n]).collect(),
        TableFamily::D(n) => return Err(range("D", n)),
        TableFamily::E6 => vec![2, 5, 6, 8, 9, 12],
        TableFamily::E7 => vec![2, 6, 8, 10, 12, 14, 18],
        TableFamily::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        TableFamily::F4 => vec![2, 6, 8, 12],
        TableFamily::G2 => vec![2, 6],
        TableFamily::H3 => vec![2, 6, 10],
        TableFamily::H4 => vec![2, 12, 20, 30],
        TableFamily::I2(m) if m >= 2 => vec![2, m],
        TableFamily::I2(m) => return Err(range("I2", m)),
    };
    Ok(DegreeRow::from_degrees(family.to_string(), degrees))
}

/// The symmetric group acting on all of `R^n`: degrees `1..n`.
pub fn sym_ambient_row(n: u32) -> Result<DegreeRow> {
    if n < 2 {
        return Err(Error::RankOutOfRange { family: "Sym".into(), rank: n as usize });
    }
    Ok(DegreeRow::from_degrees(format!("Sym({n})"), (1..=n).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: TableFamily) -> DegreeRow {
        degree_table(f).unwrap()
    }

    #[test]
    fn listed_rows() {
        assert_eq!(row(TableFamily::B(3)).to_string(), "degrees: 2 4 6 | 2dn: 12 | thmB-bound: 12");
        assert_eq!(row(TableFamily::A(3)).to_string(), "degrees: 2 3 4 | 2dn: 8 | thmB-bound: 12");
        let e8 = row(TableFamily::E8);
        assert_eq!((e8.two_dn, e8.thmb_bound), (60, 60));
        assert_eq!(row(TableFamily::E6).thmb_bound, 28);
    }

    #[test]
    fn case_splits() {
        for n in 2..12 {
            let a = row(TableFamily::A(n));
            assert_eq!(a.two_dn, 2 * (n + 1));
            assert_eq!(a.thmb_bound, if n % 2 == 1 { 2 * (n + 3) } else { 2 * (n + 4) });
        }
        for n in 3..12 {
            let d = row(TableFamily::D(n));
            assert_eq!(d.two_dn, 4 * n - 4);
            assert_eq!(d.thmb_bound, if n % 2 == 1 { 4 * n } else { 4 * n - 4 });
            assert_eq!(row(TableFamily::B(n)).thmb_bound, 4 * n);
        }
        for m in 3..20 {
            let i = row(TableFamily::I2(m));
            assert_eq!(i.two_dn, 2 * m);
            assert_eq!(i.thmb_bound, if m % 2 == 1 { 4 * m } else { 2 * m });
        }
    }

    #[test]
    fn a1_has_no_odd_degree() {
        let a1 = row(TableFamily::A(1));
        assert_eq!((a1.o_lo, a1.o_hi, a1.thmb_bound), (1, 1, 4));
    }

    #[test]
    fn ambient_sym() {
        let s3 = sym_ambient_row(3).unwrap();
        assert_eq!(s3.to_string(), "degrees: 1 2 3 | 2dn: 6 | thmB-bound: 8");
        assert_eq!(s3.group_order(), 6);
    }

    #[test]
    fn labels_parse() {
        assert_eq!("I2(5)".parse::<TableFamily>().unwrap(), TableFamily::I2(5));
        assert_eq!("e7".parse::<TableFamily>().unwrap(), TableFamily::E7);
        assert_eq!("A4".parse::<TableFamily>().unwrap(), TableFamily::A(4));
        assert_eq!(TableFamily::parse("H", Some(3)).unwrap(), TableFamily::H3);
        assert!("Q3".parse::<TableFamily>().is_err());
    }
}
