use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::exact::{coprime_basis, place_valuation, Place, RatPoly};

use super::{FibrationError, WeierstrassModel};

/// Kodaira fiber types in characteristic 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaType {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components `m_v`.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// Root lattice spanned by the non-identity components, e.g. `"A5"`, `"D7"`, `"E6"`.
    pub fn root_lattice(self) -> Option<String> {
        match self {
            KodairaType::I(n) if n >= 2 => Some(format!("A{}", n - 1)),
            KodairaType::III => Some("A1".into()),
            KodairaType::IV => Some("A2".into()),
            KodairaType::IStar(n) => Some(format!("D{}", n + 4)),
            KodairaType::IVStar => Some("E6".into()),
            KodairaType::IIIStar => Some("E7".into()),
            KodairaType::IIStar => Some("E8".into()),
            _ => None,
        }
    }

    pub fn is_reducible(self) -> bool {
        self.components() > 1
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.trim() {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            other => {
                let body = other.strip_prefix('I').ok_or_else(|| format!("unknown fiber type `{s}`"))?;
                let (digits, star) = match body.strip_suffix('*') {
                    Some(d) => (d, true),
                    None => (body, false),
                };
                let n: u32 = digits.parse().map_err(|_| format!("unknown fiber type `{s}`"))?;
                if star {
                    KodairaType::IStar(n)
                } else {
                    KodairaType::I(n)
                }
            }
        })
    }
}

/// Valuations of `c4`, `c6`, `Δ` after local minimalization (`None` = ∞).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub v_c4: Option<i64>,
    pub v_c6: Option<i64>,
    pub v_delta: i64,
    /// Number of `(4, 6, 12)` rescalings removed.
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub place: Place,
    pub kind: KodairaType,
    /// Geometric fibers over the place (its degree).
    pub multiplicity: usize,
    pub local: LocalData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KodairaConfiguration {
    pub chi: u32,
    pub fibers: Vec<Fiber>,
}

impl KodairaConfiguration {
    pub fn euler_sum(&self) -> u64 {
        self.fibers.iter().map(|f| f.kind.euler() as u64 * f.multiplicity as u64).sum()
    }

    /// Geometric fiber counts by type (smooth fibers omitted).
    pub fn counts(&self) -> BTreeMap<KodairaType, usize> {
        let mut m = BTreeMap::new();
        for f in &self.fibers {
            if f.kind != KodairaType::I(0) {
                *m.entry(f.kind).or_insert(0) += f.multiplicity;
            }
        }
        m
    }

    /// Reducible fibers, one entry per geometric fiber, in place order.
    pub fn reducible(&self) -> Vec<(usize, KodairaType)> {
        let mut out = Vec::new();
        for (i, f) in self.fibers.iter().enumerate() {
            if f.kind.is_reducible() {
                out.extend(std::iter::repeat_n((i, f.kind), f.multiplicity));
            }
        }
        out
    }

    /// `Σ (m_v − 1)` over geometric fibers.
    pub fn component_excess(&self) -> u64 {
        self.fibers.iter().map(|f| (f.kind.components() as u64 - 1) * f.multiplicity as u64).sum()
    }

    pub fn fiber_at(&self, place: &Place) -> Option<&Fiber> {
        self.fibers.iter().find(|f| &f.place == place)
    }

    /// Compact form such as `2IV*+I6+2I1`, ordered by decreasing Euler number.
    pub fn summary(&self) -> String {
        summarize(&self.counts())
    }

    /// Compares against a compact form like `I9*+I0*+3I1` (order-insensitive).
    pub fn matches(&self, expected: &str) -> bool {
        parse_summary(expected).is_ok_and(|e| e == self.counts())
    }
}

pub fn summarize(counts: &BTreeMap<KodairaType, usize>) -> String {
    let mut items: Vec<(KodairaType, usize)> = counts.iter().map(|(k, v)| (*k, *v)).collect();
    items.sort_by(|a, b| b.0.euler().cmp(&a.0.euler()).then(a.0.cmp(&b.0)));
    items
        .iter()
        .map(|(k, n)| if *n == 1 { k.to_string() } else { format!("{n}{k}") })
        .collect::<Vec<_>>()
        .join("+")
}

pub fn parse_summary(s: &str) -> Result<BTreeMap<KodairaType, usize>, String> {
    let mut m = BTreeMap::new();
    for part in s.split('+').map(str::trim).filter(|p| !p.is_empty()) {
        let split = part.find(|c: char| !c.is_ascii_digit()).unwrap_or(part.len());
        let n: usize = if split == 0 { 1 } else { part[..split].parse().map_err(|_| format!("bad count in `{part}`"))? };
        let kind: KodairaType = part[split..].parse()?;
        *m.entry(kind).or_insert(0) += n;
    }
    Ok(m)
}

fn valuation(p: &RatPoly, place: &Place, weight: i64) -> Result<Option<i64>, FibrationError> {
    if p.is_zero() {
        return Ok(None);
    }
    Ok(Some(place_valuation(p, place, weight)?))
}

/// Fiber type at a place from the characteristic-0 table on
/// `(v(c4), v(c6), v(Δ))` after removing `(4, 6, 12)` shifts.
pub fn kodaira_type_at(w: &WeierstrassModel, place: &Place) -> Result<(KodairaType, LocalData), FibrationError> {
    let c = w.c_invariants();
    let (w4, w6, w12) = w.c_weights();
    let v4 = valuation(&c.c4, place, w4)?;
    let v6 = valuation(&c.c6, place, w6)?;
    let vd = valuation(&c.delta, place, w12)?.ok_or(FibrationError::Singular)?;
    if vd < 0 || v4.is_some_and(|v| v < 0) || v6.is_some_and(|v| v < 0) {
        return Err(FibrationError::NotMinimalizable(place.to_string()));
    }
    let shift = [v4.map(|v| v / 4), v6.map(|v| v / 6), Some(vd / 12)].into_iter().flatten().min().unwrap();
    let v4 = v4.map(|v| v - 4 * shift);
    let v6 = v6.map(|v| v - 6 * shift);
    let vd = vd - 12 * shift;
    let local = LocalData { v_c4: v4, v_c6: v6, v_delta: vd, shift };
    let kind = if vd == 0 {
        KodairaType::I(0)
    } else if v4 == Some(0) {
        KodairaType::I(vd as u32)
    } else {
        match vd {
            2 => KodairaType::II,
            3 => KodairaType::III,
            4 => KodairaType::IV,
            6 => KodairaType::IStar(0),
            n if n >= 7 && v4 == Some(2) => KodairaType::IStar((n - 6) as u32),
            8 => KodairaType::IVStar,
            9 => KodairaType::IIIStar,
            10 => KodairaType::IIStar,
            _ => return Err(FibrationError::NotMinimalizable(place.to_string())),
        }
    };
    Ok((kind, local))
}

/// Places where `Δ` vanishes (∞ included when `v∞(Δ) > 0`), split finely
/// enough that `c4`, `c6`, `Δ` have constant valuations on each.
pub fn bad_places(w: &WeierstrassModel) -> Result<Vec<Place>, FibrationError> {
    let c = w.c_invariants();
    let inputs: Vec<RatPoly> = [&c.delta, &c.c4, &c.c6].into_iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut out: Vec<Place> = coprime_basis(&inputs)?
        .into_iter()
        .filter(|e| e.exponents[0] > 0)
        .map(|e| Place::Finite(e.poly))
        .collect();
    if place_valuation(&c.delta, &Place::Infinity, w.c_weights().2)? > 0 {
        out.push(Place::Infinity);
    }
    Ok(out)
}

/// Types every bad place and checks `Σ e(F_v) = 12χ`.
pub fn classify(w: &WeierstrassModel) -> Result<KodairaConfiguration, FibrationError> {
    let mut fibers = Vec::new();
    for place in bad_places(w)? {
        let (kind, local) = kodaira_type_at(w, &place)?;
        let multiplicity = place.degree();
        fibers.push(Fiber { place, kind, multiplicity, local });
    }
    let cfg = KodairaConfiguration { chi: w.chi(), fibers };
    let expected = 12 * w.chi() as u64;
    if cfg.euler_sum() != expected {
        return Err(FibrationError::EulerMismatch { got: cfg.euler_sum(), expected });
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn type_strings_roundtrip() {
        for s in ["I0", "I18", "I9*", "I0*", "II", "III", "IV", "IV*", "III*", "II*"] {
            assert_eq!(s.parse::<KodairaType>().unwrap().to_string(), s);
        }
        let m = parse_summary("2IV*+I6+2I1").unwrap();
        assert_eq!(summarize(&m), "2IV*+I6+2I1");
    }

    #[test]
    fn pure_cubic_has_three_iv_star() {
        let b = RatPoly::from_ints(&[1, 0, -1]).pow(4);
        let w = WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), b).unwrap();
        let places = bad_places(&w).unwrap();
        assert_eq!(places, vec![Place::at(&rat(-1, 1)), Place::at(&rat(1, 1)), Place::Infinity]);
        let (k, local) = kodaira_type_at(&w, &Place::at(&rat(1, 1))).unwrap();
        assert_eq!(k, KodairaType::IVStar);
        assert_eq!((local.v_c4, local.v_c6, local.v_delta), (None, Some(4), 8));
        assert!(classify(&w).unwrap().matches("3IV*"));
    }

    #[test]
    fn non_minimal_place_is_reduced() {
        // y² = x³ + t⁷ is y² = x³ + t after x ↦ t²x: type II at 0.
        let w = WeierstrassModel::squared(2, RatPoly::zero(), RatPoly::zero(), RatPoly::monomial(rat(1, 1), 7)).unwrap();
        let (k, local) = kodaira_type_at(&w, &Place::at(&rat(0, 1))).unwrap();
        assert_eq!((k, local.shift), (KodairaType::II, 1));
    }
}
