//! PD codes, Wirtinger presentations, peripheral systems and Dehn filling.
//!
//! A crossing `X(i, j, k, l)` lists its four edge labels counterclockwise,
//! starting from the incoming edge of the under-strand, so the under-strand
//! runs `i → k`. At a positive crossing the over-strand runs `l → j`, at a
//! negative one `j → l`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::words::{strip_comment, Alphabet, FinitePresentation, Word};

/// The bundled knot table (unknot, 3_1, 4_1 and the four ten-crossing knots).
pub const BUNDLED_TABLE: &str = include_str!("../data/knots.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("malformed crossing `{0}`")]
    Malformed(String),
    #[error("empty crossing list (use the `unknot` keyword)")]
    Empty,
    #[error("arc label {label} occurs {count} times")]
    Multiplicity { label: u32, count: usize },
    #[error("diagram has more than one component")]
    MultipleComponents,
    #[error("crossing signs are inconsistent with a single orientation")]
    Orientation,
    #[error("crossing {0} has no sign and labels are not consecutive")]
    MissingSign(usize),
    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("invalid slope ({p}, {q}): need gcd 1 and not both zero")]
    Slope { p: i64, q: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub labels: [u32; 4],
    pub sign: i8,
}

impl Crossing {
    fn over_in(&self) -> u32 {
        if self.sign > 0 { self.labels[3] } else { self.labels[1] }
    }

    fn over_out(&self) -> u32 {
        if self.sign > 0 { self.labels[1] } else { self.labels[3] }
    }
}

/// A validated single-component diagram; no crossings means the unknot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotDiagram {
    pub name: String,
    pub crossings: Vec<Crossing>,
}

impl KnotDiagram {
    pub fn unknot(name: &str) -> KnotDiagram {
        KnotDiagram { name: name.to_string(), crossings: Vec::new() }
    }

    pub fn is_unknot_keyword(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :=", self.name)?;
        if self.crossings.is_empty() {
            return write!(f, " unknot");
        }
        for c in &self.crossings {
            let [i, j, k, l] = c.labels;
            write!(f, " X({i},{j},{k},{l}){}", if c.sign > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// Parses the crossing list of one table entry, e.g. `X(1,5,2,4)+ X(3,1,4,6)+ X(5,3,6,2)+`.
///
/// Signs may be omitted when the labels are `1..=2n` numbered consecutively
/// along the orientation; they are then derived.
pub fn parse_pd(name: &str, text: &str) -> Result<KnotDiagram, KnotError> {
    let text = text.trim();
    if text == "unknot" {
        return Ok(KnotDiagram::unknot(name));
    }
    let mut raw: Vec<([u32; 4], Option<i8>)> = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let malformed = || KnotError::Malformed(rest.chars().take(24).collect());
        let body = rest.strip_prefix("X(").ok_or_else(malformed)?;
        let close = body.find(')').ok_or_else(malformed)?;
        let nums: Vec<u32> = body[..close]
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| malformed())?;
        let labels: [u32; 4] = nums.try_into().map_err(|_| malformed())?;
        let mut after = &body[close + 1..];
        let sign = match after.chars().next() {
            Some('+') => Some(1),
            Some('-') => Some(-1),
            _ => None,
        };
        if sign.is_some() {
            after = &after[1..];
        }
        if !(after.is_empty() || after.starts_with(char::is_whitespace)) {
            return Err(malformed());
        }
        raw.push((labels, sign));
        rest = after.trim_start();
    }
    if raw.is_empty() {
        return Err(KnotError::Empty);
    }
    let mut count: BTreeMap<u32, usize> = BTreeMap::new();
    for (ls, _) in &raw {
        for &l in ls {
            *count.entry(l).or_default() += 1;
        }
    }
    if let Some((&label, &c)) = count.iter().find(|(_, &c)| c != 2) {
        return Err(KnotError::Multiplicity { label, count: c });
    }
    let n2 = 2 * raw.len() as u32;
    let consecutive = count.keys().copied().eq(1..=n2);
    let mut crossings = Vec::with_capacity(raw.len());
    for (idx, (labels, sign)) in raw.into_iter().enumerate() {
        let sign = match sign {
            Some(s) => s,
            None if consecutive => {
                let [_, j, _, l] = labels;
                if (j % n2) + 1 == l || (l % n2) + 1 == j {
                    if (l % n2) + 1 == j { 1 } else { -1 }
                } else {
                    return Err(KnotError::MissingSign(idx));
                }
            }
            None => return Err(KnotError::MissingSign(idx)),
        };
        crossings.push(Crossing { labels, sign });
    }
    let d = KnotDiagram { name: name.to_string(), crossings };
    Walk::new(&d)?;
    Ok(d)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Under,
    Over,
}

/// One pass along the knot starting at the outgoing under-edge of crossing 0.
struct Walk {
    // arc index of every edge label
    arc_of: HashMap<u32, usize>,
    // (crossing, incoming arc) for every under-passage, in traversal order
    unders: Vec<usize>,
}

impl Walk {
    fn new(d: &KnotDiagram) -> Result<Walk, KnotError> {
        let mut head: HashMap<u32, (usize, Role)> = HashMap::new();
        let mut tail: HashMap<u32, usize> = HashMap::new();
        for (c, x) in d.crossings.iter().enumerate() {
            for (e, role) in [(x.labels[0], Role::Under), (x.over_in(), Role::Over)] {
                if head.insert(e, (c, role)).is_some() {
                    return Err(KnotError::Orientation);
                }
            }
            for e in [x.labels[2], x.over_out()] {
                if tail.insert(e, c).is_some() {
                    return Err(KnotError::Orientation);
                }
            }
        }
        let start = d.crossings[0].labels[2];
        let mut arc_of = HashMap::new();
        let mut unders = Vec::new();
        let mut arc = 0;
        let mut e = start;
        loop {
            arc_of.insert(e, arc);
            let (c, role) = head[&e];
            let x = &d.crossings[c];
            e = match role {
                Role::Over => x.over_out(),
                Role::Under => {
                    unders.push(c);
                    arc += 1;
                    x.labels[2]
                }
            };
            if e == start {
                break;
            }
            if arc_of.len() > head.len() {
                return Err(KnotError::Orientation);
            }
        }
        if arc_of.len() != head.len() {
            return Err(KnotError::MultipleComponents);
        }
        Ok(Walk { arc_of, unders })
    }
}

/// Meridian and 0-framed longitude, plus an explicit proof that they commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralSystem {
    pub meridian: Word,
    pub longitude: Word,
    pub commutation: RelatorConsequence,
}

/// A product `Π c_i r_{k_i}^{e_i} c_i⁻¹` of conjugates of relators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelatorConsequence {
    pub factors: Vec<(Word, usize, i8)>,
}

impl RelatorConsequence {
    pub fn evaluate(&self, relators: &[Word]) -> Word {
        self.factors.iter().fold(Word::identity(), |acc, (c, k, e)| {
            let r = if *e > 0 { relators[*k].clone() } else { relators[*k].inverse() };
            acc.mul(&c.mul(&r).mul(&c.inverse()))
        })
    }

    fn conjugate_by(&mut self, c: &Word) {
        for f in &mut self.factors {
            f.0 = c.mul(&f.0);
        }
    }
}

/// Result of [`wirtinger`].
#[derive(Clone, Debug)]
pub struct WirtingerPresentation {
    pub presentation: FinitePresentation,
    pub peripheral: PeripheralSystem,
    /// One relator per crossing, none dropped; the certificate refers to these.
    pub all_relators: Vec<Word>,
    /// Index (in crossing order) of the relation left out of `presentation`.
    pub dropped: Option<usize>,
}

impl WirtingerPresentation {
    /// Re-checks the commutation certificate by free reduction.
    pub fn commutation_verified(&self) -> bool {
        let p = &self.peripheral;
        let target = Word::commutator(&p.meridian, &p.longitude);
        p.commutation.evaluate(&self.all_relators) == target
    }
}

/// One generator `x1..xn` per arc, numbered along the orientation from the
/// outgoing under-edge of the first crossing. The relation of the last
/// crossing in the list is dropped.
pub fn wirtinger(d: &KnotDiagram) -> WirtingerPresentation {
    if d.crossings.is_empty() {
        let p = FinitePresentation::from_strs(&["m"], &[]).unwrap();
        return WirtingerPresentation {
            presentation: p,
            peripheral: PeripheralSystem {
                meridian: Word::generator(0),
                longitude: Word::identity(),
                commutation: RelatorConsequence::default(),
            },
            all_relators: Vec::new(),
            dropped: None,
        };
    }
    let walk = Walk::new(d).expect("diagram was validated");
    let n = d.crossings.len();
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let alphabet = Alphabet::new(&names).unwrap();

    // relation at a crossing: x_out = w⁻¹ x_in w with w = x_over^sign
    let mut rel_of_crossing: Vec<Word> = vec![Word::identity(); n];
    let mut w_of_crossing: Vec<Word> = vec![Word::identity(); n];
    for (m, &c) in walk.unders.iter().enumerate() {
        let x = &d.crossings[c];
        let over = walk.arc_of[&x.over_in()];
        let w = Word::power_of(over, x.sign as i64);
        let (xin, xout) = (Word::generator(m), Word::generator((m + 1) % n));
        rel_of_crossing[c] = w.inverse().mul(&xin).mul(&w).mul(&xout.inverse());
        w_of_crossing[c] = w;
    }

    // E_m = P_m⁻¹ x1 P_m and E_m x_{m+1}⁻¹ = w_m⁻¹ (E_{m-1} x_m⁻¹) w_m · r_m
    let mut cert = RelatorConsequence::default();
    let mut prefix = Word::identity();
    for &c in &walk.unders {
        let w = &w_of_crossing[c];
        cert.conjugate_by(&w.inverse());
        cert.factors.push((Word::identity(), c, 1));
        prefix = prefix.mul(w);
    }
    // [μ, λ] = P (P⁻¹ x1 P x1⁻¹) P⁻¹
    cert.conjugate_by(&prefix);
    let meridian = Word::generator(0);
    let longitude = prefix.mul(&Word::power_of(0, -d.writhe()));

    let dropped = n - 1;
    let kept: Vec<Word> = (0..n).filter(|&c| c != dropped).map(|c| rel_of_crossing[c].clone()).collect();
    let presentation = FinitePresentation::new(alphabet, kept).unwrap();
    WirtingerPresentation {
        presentation,
        peripheral: PeripheralSystem { meridian, longitude, commutation: cert },
        all_relators: rel_of_crossing,
        dropped: Some(dropped),
    }
}

/// Filling slope `(p, q)`: the curve `μ^p λ^q` bounds a disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FillingSlope {
    p: i64,
    q: i64,
}

impl FillingSlope {
    pub fn new(p: i64, q: i64) -> Result<FillingSlope, KnotError> {
        if (p == 0 && q == 0) || p.gcd(&q) != 1 {
            return Err(KnotError::Slope { p, q });
        }
        Ok(FillingSlope { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Parses `p/q` or a bare integer `p` (meaning `p/1`).
    pub fn parse(text: &str) -> Result<FillingSlope, KnotError> {
        let bad = || KnotError::Malformed(text.to_string());
        let (p, q) = match text.split_once('/') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => (text.trim().parse().map_err(|_| bad())?, 1),
        };
        FillingSlope::new(p, q)
    }
}

impl fmt::Display for FillingSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Adds the relator `μ^p λ^q`.
pub fn dehn_fill(p: &FinitePresentation, per: &PeripheralSystem, slope: FillingSlope) -> FinitePresentation {
    let r = per.meridian.pow(slope.p).mul(&per.longitude.pow(slope.q));
    let mut out = p.clone();
    out.add_relator(r).expect("peripheral words lie in the alphabet");
    out
}

/// Knot table in the `name := X(...)... | unknot` line format.
#[derive(Clone, Debug, Default)]
pub struct KnotTable {
    knots: BTreeMap<String, KnotDiagram>,
    order: Vec<String>,
}

impl KnotTable {
    pub fn parse(text: &str) -> Result<KnotTable, KnotError> {
        let mut t = KnotTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| KnotError::Table { line: i + 1, message };
            let (name, body) = line.split_once(":=").ok_or_else(|| err("expected `name := ...`".into()))?;
            let name = name.trim();
            if !crate::words::is_valid_name(name) {
                return Err(err(format!("invalid knot name `{name}`")));
            }
            let d = parse_pd(name, body).map_err(|e| err(e.to_string()))?;
            if t.knots.insert(name.to_string(), d).is_some() {
                return Err(err(format!("duplicate knot `{name}`")));
            }
            t.order.push(name.to_string());
        }
        Ok(t)
    }

    pub fn bundled() -> KnotTable {
        KnotTable::parse(BUNDLED_TABLE).expect("bundled table is valid")
    }

    pub fn get(&self, name: &str) -> Result<&KnotDiagram, KnotError> {
        self.knots.get(name).ok_or_else(|| KnotError::UnknownKnot(name.to_string()))
    }

    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = &KnotDiagram> {
        self.order.iter().map(|n| &self.knots[n])
    }
}
