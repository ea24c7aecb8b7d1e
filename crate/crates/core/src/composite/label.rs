use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The five symmetry classes of a knot type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryType {
    NoSymmetry,
    NegAmphichiral,
    Invertible,
    PosAmphichiral,
    Full,
}

impl SymmetryType {
    pub const ALL: [SymmetryType; 5] = [
        SymmetryType::NoSymmetry,
        SymmetryType::NegAmphichiral,
        SymmetryType::Invertible,
        SymmetryType::PosAmphichiral,
        SymmetryType::Full,
    ];

    /// Variants that are distinct knot types.
    pub fn variants(self) -> &'static [Variant] {
        use Variant::*;
        match self {
            SymmetryType::NoSymmetry => &[Base, M, R, Rm],
            SymmetryType::NegAmphichiral => &[Base, M],
            SymmetryType::Invertible => &[Base, M],
            SymmetryType::PosAmphichiral => &[Base, R],
            SymmetryType::Full => &[Base],
        }
    }

    /// The listed representative of `v` among [`variants`](Self::variants).
    pub fn canonical(self, v: Variant) -> Variant {
        use Variant::*;
        let (m, r) = v.bits();
        match self {
            SymmetryType::NoSymmetry => v,
            SymmetryType::Invertible => Variant::from_bits(m, false),
            SymmetryType::PosAmphichiral => Variant::from_bits(false, r),
            SymmetryType::Full => Base,
            // K = K^rm, so K^m = K^r
            SymmetryType::NegAmphichiral => {
                if m == r {
                    Base
                } else {
                    M
                }
            }
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SymmetryType::NoSymmetry => "none",
            SymmetryType::NegAmphichiral => "negamphi",
            SymmetryType::Invertible => "invertible",
            SymmetryType::PosAmphichiral => "posamphi",
            SymmetryType::Full => "full",
        }
    }
}

impl FromStr for SymmetryType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SymmetryType::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown symmetry type `{s}`")))
    }
}

impl fmt::Display for SymmetryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Mirror and orientation-reversal applied to a prime knot, ordered `K < K^m < K^r < K^rm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Base,
    M,
    R,
    Rm,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Base, Variant::M, Variant::R, Variant::Rm];

    /// `(mirrored, reversed)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Variant::Base => (false, false),
            Variant::M => (true, false),
            Variant::R => (false, true),
            Variant::Rm => (true, true),
        }
    }

    pub fn from_bits(mirrored: bool, reversed: bool) -> Variant {
        match (mirrored, reversed) {
            (false, false) => Variant::Base,
            (true, false) => Variant::M,
            (false, true) => Variant::R,
            (true, true) => Variant::Rm,
        }
    }

    /// Applies the global operation `g` (itself encoded as a variant) on top of `self`.
    pub fn compose(self, g: Variant) -> Variant {
        let (a, b) = self.bits();
        let (c, d) = g.bits();
        Variant::from_bits(a ^ c, b ^ d)
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Variant::Base => "",
            Variant::M => "m",
            Variant::R => "r",
            Variant::Rm => "rm",
        }
    }
}

/// A prime knot type from the Rolfsen table, e.g. `8_17`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeKnot {
    pub crossings: u32,
    pub index: u32,
    pub symmetry: SymmetryType,
}

impl PrimeKnot {
    pub fn name(&self) -> String {
        format!("{}_{}", self.crossings, self.index)
    }
}

impl PartialOrd for PrimeKnot {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeKnot {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.crossings, self.index, self.symmetry).cmp(&(
            other.crossings,
            other.index,
            other.symmetry,
        ))
    }
}

/// One oriented prime factor of a composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub prime: PrimeKnot,
    pub variant: Variant,
}

impl Summand {
    /// Builds a summand with `variant` reduced to its listed representative.
    pub fn new(prime: PrimeKnot, variant: Variant) -> Self {
        Summand {
            prime,
            variant: prime.symmetry.canonical(variant),
        }
    }

    pub fn transformed(self, g: Variant) -> Summand {
        Summand::new(self.prime, self.variant.compose(g))
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.prime.name(), self.variant.suffix())
    }
}

/// A composite knot type: its summands in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnotLabel {
    summands: Vec<Summand>,
}

impl KnotLabel {
    pub fn new(mut summands: Vec<Summand>) -> Self {
        summands.sort();
        KnotLabel { summands }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn crossings(&self) -> u32 {
        self.summands.iter().map(|s| s.prime.crossings).sum()
    }

    /// The label of the knot type obtained by applying `g` to the whole knot.
    pub fn transformed(&self, g: Variant) -> KnotLabel {
        KnotLabel::new(self.summands.iter().map(|s| s.transformed(g)).collect())
    }

    pub fn mirror(&self) -> KnotLabel {
        self.transformed(Variant::M)
    }

    /// Smallest label among the images under mirror and reversal.
    pub fn class_representative(&self) -> KnotLabel {
        Variant::ALL
            .iter()
            .map(|&g| self.transformed(g))
            .min()
            .expect("four images")
    }

    /// Parses `3_1#9_32rm`, looking up symmetry types in `table`.
    pub fn parse(s: &str, table: &PrimeTable) -> Result<KnotLabel> {
        let summands = s
            .trim()
            .split('#')
            .map(|part| {
                let (name, variant) = split_variant(part.trim())?;
                let prime = table
                    .get(name)
                    .ok_or_else(|| Error::MissingSymmetry(name.to_string()))?;
                let summand = Summand::new(prime, variant);
                if summand.variant != variant {
                    return Err(Error::InvalidInput(format!(
                        "`{part}` is not a listed variant of {name} ({} symmetry)",
                        prime.symmetry
                    )));
                }
                Ok(summand)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KnotLabel::new(summands))
    }
}

fn split_variant(part: &str) -> Result<(&str, Variant)> {
    let bad = || Error::InvalidInput(format!("malformed summand `{part}`"));
    let part = part.strip_suffix('}').unwrap_or(part);
    let (name, variant) = if let Some(n) = part.strip_suffix("rm") {
        (n, Variant::Rm)
    } else if let Some(n) = part.strip_suffix('m') {
        (n, Variant::M)
    } else if let Some(n) = part.strip_suffix('r') {
        (n, Variant::R)
    } else {
        (part, Variant::Base)
    };
    let name = name.strip_suffix('^').unwrap_or(name);
    let (c, i) = name.split_once('_').ok_or_else(bad)?;
    if c.parse::<u32>().is_err() || i.parse::<u32>().is_err() {
        return Err(bad());
    }
    Ok((name, variant))
}

impl fmt::Display for KnotLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str("#")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Prime knots with their symmetry types.
///
/// Entries whose symmetry is recorded as `unknown` are kept by name so that
/// enumeration can report them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrimeTable {
    primes: Vec<PrimeKnot>,
    unknown: Vec<(u32, u32)>,
}

impl PrimeTable {
    pub fn new(mut primes: Vec<PrimeKnot>) -> Self {
        primes.sort();
        primes.dedup_by_key(|p| (p.crossings, p.index));
        PrimeTable {
            primes,
            unknown: Vec::new(),
        }
    }

    pub fn primes(&self) -> &[PrimeKnot] {
        &self.primes
    }

    /// `(crossings, index)` of primes listed without symmetry data.
    pub fn missing_symmetry(&self) -> &[(u32, u32)] {
        &self.unknown
    }

    pub fn get(&self, name: &str) -> Option<PrimeKnot> {
        let (c, i) = name.split_once('_')?;
        let (c, i): (u32, u32) = (c.parse().ok()?, i.parse().ok()?);
        self.primes
            .iter()
            .find(|p| p.crossings == c && p.index == i)
            .copied()
    }
}

/// Parses lines of `name crossings index symmetry`; `#` starts a comment.
///
/// `symmetry` is one of `none`, `negamphi`, `invertible`, `posamphi`, `full`,
/// or `unknown`.
pub fn parse_prime_table(text: &str) -> Result<PrimeTable> {
    let mut primes = Vec::new();
    let mut unknown = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lno + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, crossings, index, symmetry] = fields[..] else {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        };
        let crossings: u32 = crossings
            .parse()
            .map_err(|_| err(format!("invalid crossing number `{crossings}`")))?;
        let index: u32 = index
            .parse()
            .map_err(|_| err(format!("invalid index `{index}`")))?;
        if name != format!("{crossings}_{index}") {
            return Err(err(format!(
                "name `{name}` does not match {crossings}_{index}"
            )));
        }
        if symmetry == "unknown" || symmetry == "?" {
            unknown.push((crossings, index));
            continue;
        }
        let symmetry: SymmetryType = symmetry.parse().map_err(|e: Error| err(e.to_string()))?;
        primes.push(PrimeKnot {
            crossings,
            index,
            symmetry,
        });
    }
    let mut table = PrimeTable::new(primes);
    unknown.sort();
    table.unknown = unknown;
    Ok(table)
}

pub fn read_prime_table(path: impl AsRef<Path>) -> Result<PrimeTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_prime_table(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        parse_prime_table(
            "3_1 3 1 invertible\n4_1 4 1 full\n8_17 8 17 posamphi\n9_32 9 32 none\n",
        )
        .unwrap()
    }

    #[test]
    fn label_round_trip() {
        let t = table();
        for s in ["3_1#9_32rm", "3_1m#3_1m", "3_1#8_17r", "4_1#4_1"] {
            assert_eq!(KnotLabel::parse(s, &t).unwrap().to_string(), s);
        }
    }

    #[test]
    fn summands_are_sorted() {
        let t = table();
        let l = KnotLabel::parse("4_1#3_1m", &t).unwrap();
        assert_eq!(l.to_string(), "3_1m#4_1");
    }

    #[test]
    fn unlisted_variants_are_rejected() {
        let t = table();
        assert!(KnotLabel::parse("3_1r#4_1", &t).is_err());
        assert!(KnotLabel::parse("4_1m#3_1", &t).is_err());
        assert!(matches!(
            KnotLabel::parse("3_1#5_2", &t),
            Err(Error::MissingSymmetry(_))
        ));
    }

    #[test]
    fn negamphi_identifies_mirror_and_reverse() {
        let s = SymmetryType::NegAmphichiral;
        assert_eq!(s.canonical(Variant::R), Variant::M);
        assert_eq!(s.canonical(Variant::Rm), Variant::Base);
    }

    #[test]
    fn table_errors_carry_line_numbers() {
        let e = parse_prime_table("3_1 3 1 invertible\n4_1 4 1 sideways\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
