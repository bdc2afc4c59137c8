//! Parameter points, bound records and the per-cell bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::qcalc::{self, BigRat};
use crate::Error;

/// Largest ambient dimension handled by the tables.
pub const MAX_N: i64 = 19;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::Exact => "exact",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "lower" => Some(Direction::Lower),
            "upper" => Some(Direction::Upper),
            "exact" => Some(Direction::Exact),
            _ => None,
        }
    }

    pub fn bounds_below(self) -> bool {
        matches!(self, Direction::Lower | Direction::Exact)
    }

    pub fn bounds_above(self) -> bool {
        matches!(self, Direction::Upper | Direction::Exact)
    }
}

/// Where a record came from: evaluated here, or loaded from the facts file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Derived,
    External,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Derived => "derived",
            Source::External => "external",
        }
    }

    pub fn parse(s: &str) -> Option<Source> {
        match s {
            "derived" => Some(Source::Derived),
            "external" => Some(Source::External),
            _ => None,
        }
    }
}

/// Closed list of constraint identifiers, in display order.
pub const CATALOGUE: &[&str] = &[
    // constant dimension, upper
    "all_subs",
    "singleton",
    "ilp_2",
    "ilp_3",
    "anticode",
    "sphere_packing",
    "ilp_1",
    "ilp_4",
    "johnson_1",
    "johnson_2",
    "Ahlswede_Aydinian",
    "improved_johnson",
    "XiaFuJohnson1",
    "spread_bound",
    "partial_spread_5",
    "DrakeFreeman",
    "partial_spread_NS_upper_bound",
    "partial_spread_NS_2_Theorem6",
    "partial_spread_NS_2_Theorem7",
    "partial_spread_kurz16_28",
    "partial_spread_HKK16_T10",
    "partial_spread_kurz_q3",
    "partial_spread_kurz16_additional",
    "special_case_2_8_6_4",
    // constant dimension, exact
    "spread",
    "partial_spread_2",
    "partial_spread_1",
    "partial_spread_kurz_q2",
    "partial_spread_NS",
    // constant dimension, lower
    "trivial_1",
    "lin_poly",
    "sphere_covering",
    "graham_sloane",
    "construction_1",
    "construction_2",
    "construction_ST_A_1",
    "construction_ST_B",
    "construction_3",
    "coset_construction",
    "coset_construction_parallelism_part",
    "multicomponent",
    "partial_spread_3",
    "Gorla_Ravagnani_2014",
    "HonoldKiermaierKurz_n6_d4_k3",
    "construction_honold",
    "construction_HK15",
    "expurgation_augmentation_general",
    "expurgation_augmentation_special_cases",
    "Bardestani_Iranmanesh",
    "singer_orbit_table",
    "echelon_ferrers",
    "ef_computation",
    "greedy_multicomponent",
    "CossidentePavese14_theorem311",
    "CossidentePavese14_theorem38",
    "CossidentePavese14_theorem43",
    "CossidentePavese_n6_d4_k3",
    "linkage_ST",
    "linkage_GLT",
    "improved_linkage",
    // mixed dimension
    "trivial_2",
    "trivial_3",
    "trivial_4",
    "trivial_dle1",
    "gilbert_varshamov",
    "cdc_average_argument",
    "cdc_lower_bound",
    "improved_cdc_lower_bound",
    "layer_construction",
    "nodd_deqn",
    "nodd_deqnm2_l",
    "nodd_deqnm2_u",
    "nodd_deqnm2_e",
    "semidefinite_programming",
    "special_cases_upper_notderived",
    "cdc_upper_bound",
    "improved_cdc_upper_bound",
    "Etzion_Vardy_ilp",
    "relax_d",
    "d2",
    "neqdeven",
    "neven_deqnm1",
    "nodd_deqnm1",
    "n5_d3_CPS",
    // loaded facts
    "classification",
    "external_construction",
];

/// Resolves a name to its catalogue entry.
pub fn constraint_id(name: &str) -> Option<&'static str> {
    CATALOGUE.iter().copied().find(|c| *c == name)
}

/// Position in display order; unknown names sort last.
pub fn catalogue_index(name: &str) -> usize {
    CATALOGUE.iter().position(|c| *c == name).unwrap_or(usize::MAX)
}

/// One evaluated constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRecord {
    pub constraint: &'static str,
    pub parameter: String,
    pub value: BigInt,
    pub direction: Direction,
    pub source: Source,
}

impl BoundRecord {
    pub fn new(constraint: &'static str, parameter: impl Into<String>, value: BigInt, direction: Direction) -> Self {
        debug_assert!(constraint_id(constraint).is_some(), "unknown constraint {constraint}");
        BoundRecord { constraint, parameter: parameter.into(), value, direction, source: Source::Derived }
    }

    pub fn lower(constraint: &'static str, value: BigInt) -> Self {
        Self::new(constraint, "", value, Direction::Lower)
    }

    pub fn upper(constraint: &'static str, value: BigInt) -> Self {
        Self::new(constraint, "", value, Direction::Upper)
    }

    pub fn exact(constraint: &'static str, value: BigInt) -> Self {
        Self::new(constraint, "", value, Direction::Exact)
    }

    pub fn with_param(mut self, p: impl Into<String>) -> Self {
        self.parameter = p.into();
        self
    }

    pub fn external(mut self) -> Self {
        self.source = Source::External;
        self
    }
}

/// Number of isomorphism types of optimal codes, possibly only bounded below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoTypes {
    Exactly(BigInt),
    AtLeast(BigInt),
}

impl IsoTypes {
    pub fn parse(s: &str) -> Option<IsoTypes> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix(">=") {
            rest.trim().parse().ok().map(IsoTypes::AtLeast)
        } else {
            s.parse().ok().map(IsoTypes::Exactly)
        }
    }

    pub fn to_field(&self) -> String {
        match self {
            IsoTypes::Exactly(v) => v.to_string(),
            IsoTypes::AtLeast(v) => format!(">={v}"),
        }
    }
}

impl fmt::Display for IsoTypes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoTypes::Exactly(v) => write!(f, "{v}"),
            IsoTypes::AtLeast(v) => write!(f, "≥{v}"),
        }
    }
}

/// A constant dimension parameter point `A_q(n,d;k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CdcParams {
    pub q: i64,
    pub n: i64,
    pub d: i64,
    pub k: i64,
}

impl CdcParams {
    pub fn new(q: i64, n: i64, d: i64, k: i64) -> Result<Self, Error> {
        validate_field(q)?;
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::OutOfGrid(format!("n={n} outside 1..={MAX_N}")));
        }
        if !(1..=2 * n).contains(&d) {
            return Err(Error::OutOfGrid(format!("d={d} outside 1..={}", 2 * n)));
        }
        if !(0..=n).contains(&k) {
            return Err(Error::OutOfGrid(format!("k={k} outside 0..={n}")));
        }
        Ok(CdcParams { q, n, d, k })
    }
}

impl fmt::Display for CdcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}({},{};{})", self.q, self.n, self.d, self.k)
    }
}

/// A mixed dimension parameter point `A_q(n,d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MdcParams {
    pub q: i64,
    pub n: i64,
    pub d: i64,
}

impl MdcParams {
    pub fn new(q: i64, n: i64, d: i64) -> Result<Self, Error> {
        validate_field(q)?;
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::OutOfGrid(format!("n={n} outside 1..={MAX_N}")));
        }
        if !(1..=n).contains(&d) {
            return Err(Error::OutOfGrid(format!("d={d} outside 1..={n}")));
        }
        Ok(MdcParams { q, n, d })
    }
}

impl fmt::Display for MdcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}({},{})", self.q, self.n, self.d)
    }
}

fn validate_field(q: i64) -> Result<(), Error> {
    if !qcalc::is_prime_power(q) {
        return Err(Error::InvalidParameter(format!("q={q} is not a prime power")));
    }
    if !qcalc::is_grid_field(q) {
        return Err(Error::OutOfGrid(format!("q={q} outside the supported field sizes 2..=9")));
    }
    Ok(())
}

/// Result of reducing a point to its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub canonical: CdcParams,
    /// Known value when the canonical point is degenerate.
    pub trivial: Option<BigInt>,
}

/// Maps `k` to `min(k, n-k)` and odd `d` to `d+1`, flagging degenerate cells.
pub fn normalize_cdc(p: CdcParams) -> Normalized {
    let k = p.k.min(p.n - p.k);
    let d = if p.d % 2 == 1 { p.d + 1 } else { p.d };
    let canonical = CdcParams { q: p.q, n: p.n, d, k };
    let trivial = if k == 0 || d > 2 * k {
        Some(BigInt::one())
    } else if d <= 2 {
        Some(qcalc::gauss_product(p.n, k, &BigInt::from(p.q)))
    } else {
        None
    };
    Normalized { canonical, trivial }
}

/// Bounds and supporting evidence for one table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub best_lower: BigInt,
    pub best_upper: BigInt,
    pub records: Vec<BoundRecord>,
    pub classified: bool,
    pub iso_types: Option<IsoTypes>,
    /// Upper bound for codes containing a lifted MRD code (constant dimension only).
    pub lifted_mrd_bound: Option<BigInt>,
}

impl Cell {
    pub fn new(best_lower: BigInt, best_upper: BigInt) -> Self {
        Cell { best_lower, best_upper, records: Vec::new(), classified: false, iso_types: None, lifted_mrd_bound: None }
    }

    pub fn is_exact(&self) -> bool {
        self.best_lower == self.best_upper
    }
}

/// `(u - l) / l`.
pub fn relative_gap(cell: &Cell) -> Result<BigRat, Error> {
    if cell.best_lower.is_zero() {
        return Err(Error::UndefinedView("relative gap needs a positive lower bound".into()));
    }
    Ok(BigRat::new(&cell.best_upper - &cell.best_lower, cell.best_lower.clone()))
}

/// `l / u`.
pub fn ratio_of_bounds(cell: &Cell) -> Result<BigRat, Error> {
    if cell.best_lower.is_zero() {
        return Err(Error::UndefinedView("ratio needs a positive lower bound".into()));
    }
    Ok(BigRat::new(cell.best_lower.clone(), cell.best_upper.clone()))
}

/// Best upper bound relative to the anticode bound.
pub fn density(cell: &Cell, anticode: &BigInt) -> Result<BigRat, Error> {
    if anticode <= &BigInt::zero() {
        return Err(Error::UndefinedView("anticode reference must be positive".into()));
    }
    Ok(BigRat::new(cell.best_upper.clone(), anticode.clone()))
}

/// Best lower bound relative to the anticode bound.
pub fn realized_density(cell: &Cell, anticode: &BigInt) -> Result<BigRat, Error> {
    if anticode <= &BigInt::zero() {
        return Err(Error::UndefinedView("anticode reference must be positive".into()));
    }
    Ok(BigRat::new(cell.best_lower.clone(), anticode.clone()))
}

/// Decimal rendering rounded half up to `places` digits.
pub fn format_decimal(r: &BigRat, places: u32) -> String {
    let scale = qcalc::pow(&BigInt::from(10), places);
    let scaled = r * BigRat::from_integer(scale.clone());
    let rounded = (scaled + BigRat::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let neg = rounded < BigInt::zero();
    let abs = if neg { -rounded } else { rounded };
    let int_part = &abs / &scale;
    let frac_part = &abs % &scale;
    let frac = format!("{:0>width$}", frac_part.to_string(), width = places as usize);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn normalization_examples() {
        let n = normalize_cdc(CdcParams::new(2, 7, 4, 4).unwrap());
        assert_eq!(n.canonical, CdcParams { q: 2, n: 7, d: 4, k: 3 });
        assert_eq!(n.trivial, None);
        let n = normalize_cdc(CdcParams::new(2, 7, 3, 3).unwrap());
        assert_eq!(n.canonical, CdcParams { q: 2, n: 7, d: 4, k: 3 });
        let n = normalize_cdc(CdcParams::new(2, 6, 8, 3).unwrap());
        assert_eq!(n.trivial, Some(b(1)));
        let n = normalize_cdc(CdcParams::new(2, 6, 2, 3).unwrap());
        assert_eq!(n.trivial, Some(b(1395)));
        let n = normalize_cdc(CdcParams::new(2, 6, 1, 6).unwrap());
        assert_eq!(n.trivial, Some(b(1)));
    }

    #[test]
    fn validation() {
        assert!(matches!(CdcParams::new(6, 6, 4, 3), Err(Error::InvalidParameter(_))));
        assert!(matches!(CdcParams::new(11, 6, 4, 3), Err(Error::OutOfGrid(_))));
        assert!(matches!(CdcParams::new(2, 20, 4, 3), Err(Error::OutOfGrid(_))));
        assert!(MdcParams::new(2, 6, 7).is_err());
        assert!(MdcParams::new(2, 6, 6).is_ok());
    }

    #[test]
    fn view_arithmetic() {
        let c = Cell::new(b(333), b(381));
        assert_eq!(relative_gap(&c).unwrap(), BigRat::new(b(48), b(333)));
        let e = Cell::new(b(77), b(77));
        assert_eq!(relative_gap(&e).unwrap(), BigRat::from_integer(b(0)));
        assert_eq!(ratio_of_bounds(&e).unwrap(), BigRat::from_integer(b(1)));
        assert_eq!(density(&e, &b(93)).unwrap(), BigRat::new(b(77), b(93)));
        let z = Cell::new(b(0), b(5));
        assert!(relative_gap(&z).is_err());
        assert_eq!(realized_density(&z, &b(5)).unwrap(), BigRat::from_integer(b(0)));
    }

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(&BigRat::new(b(48), b(333)), 3), "0.144");
        assert_eq!(format_decimal(&BigRat::from_integer(b(1)), 3), "1.000");
        assert_eq!(format_decimal(&BigRat::new(b(1), b(2000)), 3), "0.001");
        assert_eq!(format_decimal(&BigRat::new(b(77), b(93)), 3), "0.828");
    }

    #[test]
    fn iso_round_trip() {
        for s in ["5", ">=624"] {
            assert_eq!(IsoTypes::parse(s).unwrap().to_field(), s);
        }
        assert_eq!(IsoTypes::parse(">=624").unwrap().to_string(), "≥624");
    }

    #[test]
    fn catalogue_is_unique() {
        let mut names: Vec<_> = CATALOGUE.to_vec();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CATALOGUE.len());
    }
}
