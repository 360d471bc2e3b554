use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rep::{self, Morphism, Quiver, Rep};
use super::QuiverError;
use crate::exact::{QMat, Rat};

/// A point of ℙ¹(ℚ) in the coordinate `x = g/f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Rat),
    Infinity,
}

impl Point {
    pub fn int(v: i64) -> Point {
        Point::Finite(Rat::int(v))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Point::Finite(r) => Some(r),
            Point::Infinity => None,
        }
    }
}

/// Finite points ascending, `∞` last.
impl Ord for Point {
    fn cmp(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Finite(a), Point::Finite(b)) => a.cmp(b),
            (Point::Finite(_), Point::Infinity) => Ordering::Less,
            (Point::Infinity, Point::Finite(_)) => Ordering::Greater,
            (Point::Infinity, Point::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Point) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(r) => write!(f, "{r}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Point {
    type Err = QuiverError;

    fn from_str(s: &str) -> Result<Point, QuiverError> {
        let t = s.trim();
        if matches!(t, "inf" | "∞" | "infinity") {
            return Ok(Point::Infinity);
        }
        t.parse::<Rat>().map(Point::Finite).map_err(|_| QuiverError::BadPoint(s.to_string()))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::I(v) => Ok(Point::int(v)),
        }
    }
}

/// `F, G : V₁ → V₂`, both `d2 × d1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KronRep {
    pub d1: usize,
    pub d2: usize,
    #[serde(rename = "F")]
    pub f: QMat,
    #[serde(rename = "G")]
    pub g: QMat,
}

impl<'de> Deserialize<'de> for KronRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<KronRep, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            d1: usize,
            d2: usize,
            #[serde(rename = "F")]
            f: Vec<Vec<Rat>>,
            #[serde(rename = "G")]
            g: Vec<Vec<Rat>>,
        }
        let r = Raw::deserialize(d)?;
        let mat = |rows: Vec<Vec<Rat>>, name: &str| -> Result<QMat, D::Error> {
            let shape_ok = rows.len() == r.d2 && rows.iter().all(|row| row.len() == r.d1);
            // An empty row list stands for any matrix with a zero dimension.
            if !shape_ok && !(rows.is_empty() && r.d1 * r.d2 == 0) {
                return Err(serde::de::Error::custom(format!("{name} must be {}x{}", r.d2, r.d1)));
            }
            if rows.is_empty() {
                return Ok(QMat::zeros(r.d2, r.d1));
            }
            Ok(QMat::from_rows(rows, r.d1))
        };
        let f = mat(r.f, "F")?;
        let g = mat(r.g, "G")?;
        Ok(KronRep { d1: r.d1, d2: r.d2, f, g })
    }
}

/// `A1: V₁ → V₁'`, `A2: V₂ → V₂'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepMap {
    #[serde(rename = "A1")]
    pub a1: QMat,
    #[serde(rename = "A2")]
    pub a2: QMat,
}

impl KronRep {
    pub fn new(f: QMat, g: QMat) -> Result<KronRep, QuiverError> {
        if f.shape() != g.shape() {
            return Err(QuiverError::Shape(format!("F is {:?}, G is {:?}", f.shape(), g.shape())));
        }
        let (d2, d1) = f.shape();
        Ok(KronRep { d1, d2, f, g })
    }

    pub fn from_ints(d1: usize, d2: usize, f: &[i64], g: &[i64]) -> KronRep {
        KronRep { d1, d2, f: QMat::from_ints(d2, d1, f), g: QMat::from_ints(d2, d1, g) }
    }

    pub fn zero() -> KronRep {
        KronRep { d1: 0, d2: 0, f: QMat::zeros(0, 0), g: QMat::zeros(0, 0) }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn is_zero(&self) -> bool {
        self.d1 == 0 && self.d2 == 0
    }

    pub fn to_rep(&self) -> Rep {
        Rep::new(Quiver::Kronecker, vec![self.d1, self.d2], vec![self.f.clone(), self.g.clone()])
    }

    pub fn from_rep(r: &Rep) -> KronRep {
        assert_eq!(r.quiver, Quiver::Kronecker);
        KronRep { d1: r.dims[0], d2: r.dims[1], f: r.maps[0].clone(), g: r.maps[1].clone() }
    }

    pub fn direct_sum(&self, other: &KronRep) -> KronRep {
        KronRep {
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
            f: QMat::block_diag(&[&self.f, &other.f]),
            g: QMat::block_diag(&[&self.g, &other.g]),
        }
    }

    pub fn sum_all<'a>(reps: impl IntoIterator<Item = &'a KronRep>) -> KronRep {
        reps.into_iter().fold(KronRep::zero(), |acc, r| acc.direct_sum(r))
    }

    /// The representation transported along the invertible pair `c`:
    /// `F ↦ A2·F·A1⁻¹`, likewise `G`.
    pub fn conjugate(&self, c: &RepMap) -> Result<KronRep, QuiverError> {
        let i1 = c.a1.inverse().ok_or(QuiverError::Singular)?;
        Ok(KronRep { d1: self.d1, d2: self.d2, f: c.a2.mul(&self.f).mul(&i1), g: c.a2.mul(&self.g).mul(&i1) })
    }

    /// `(V₂*, V₁*, Fᵀ, Gᵀ)`.
    pub fn dual(&self) -> KronRep {
        KronRep { d1: self.d2, d2: self.d1, f: self.f.transpose(), g: self.g.transpose() }
    }

    /// The pencil with `F` and `G` swapped, i.e. the coordinate change `x ↦ 1/x`.
    pub fn swapped(&self) -> KronRep {
        KronRep { d1: self.d1, d2: self.d2, f: self.g.clone(), g: self.f.clone() }
    }
}

impl RepMap {
    pub fn new(a1: QMat, a2: QMat) -> RepMap {
        RepMap { a1, a2 }
    }

    pub fn zero(s: &KronRep, t: &KronRep) -> RepMap {
        RepMap { a1: QMat::zeros(t.d1, s.d1), a2: QMat::zeros(t.d2, s.d2) }
    }

    pub fn identity(m: &KronRep) -> RepMap {
        RepMap { a1: QMat::identity(m.d1), a2: QMat::identity(m.d2) }
    }

    pub fn is_intertwiner(&self, s: &KronRep, t: &KronRep) -> bool {
        self.a1.shape() == (t.d1, s.d1)
            && self.a2.shape() == (t.d2, s.d2)
            && self.a2.mul(&s.f) == t.f.mul(&self.a1)
            && self.a2.mul(&s.g) == t.g.mul(&self.a1)
    }

    pub fn compose(&self, inner: &RepMap) -> RepMap {
        RepMap { a1: self.a1.mul(&inner.a1), a2: self.a2.mul(&inner.a2) }
    }

    pub fn is_iso(&self) -> bool {
        self.a1.is_invertible() && self.a2.is_invertible()
    }

    pub fn inverse(&self) -> Option<RepMap> {
        Some(RepMap { a1: self.a1.inverse()?, a2: self.a2.inverse()? })
    }

    pub fn to_morphism(&self) -> Morphism {
        Morphism { comps: vec![self.a1.clone(), self.a2.clone()] }
    }

    pub fn from_morphism(m: &Morphism) -> RepMap {
        RepMap { a1: m.comps[0].clone(), a2: m.comps[1].clone() }
    }
}

/// Named indecomposables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StdRep {
    SimpleProjective,
    SimpleInjective,
    /// The projective cover of the simple at vertex `i ∈ {1, 2}`.
    Projective(usize),
    /// The injective envelope of the simple at vertex `i ∈ {1, 2}`.
    Injective(usize),
    Regular(Point, usize),
    /// Dimension vector `(n, n+1)`.
    Preprojective(usize),
    /// Dimension vector `(n+1, n)`.
    Preinjective(usize),
}

impl fmt::Display for StdRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StdRep::SimpleProjective => write!(f, "simple_projective"),
            StdRep::SimpleInjective => write!(f, "simple_injective"),
            StdRep::Projective(i) => write!(f, "projective({i})"),
            StdRep::Injective(i) => write!(f, "injective({i})"),
            StdRep::Regular(p, n) => write!(f, "regular({p},{n})"),
            StdRep::Preprojective(n) => write!(f, "preprojective({n})"),
            StdRep::Preinjective(n) => write!(f, "preinjective({n})"),
        }
    }
}

impl FromStr for StdRep {
    type Err = QuiverError;

    fn from_str(s: &str) -> Result<StdRep, QuiverError> {
        let bad = || QuiverError::InvalidKind(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, args) = match t.find('(') {
            Some(i) if t.ends_with(')') => (&t[..i], t[i + 1..t.len() - 1].split(',').collect::<Vec<_>>()),
            Some(_) => return Err(bad()),
            None => (t.as_str(), Vec::new()),
        };
        let num = |a: &str| a.parse::<usize>().map_err(|_| bad());
        match (name, args.as_slice()) {
            ("simple_projective", []) => Ok(StdRep::SimpleProjective),
            ("simple_injective", []) => Ok(StdRep::SimpleInjective),
            ("projective", [i]) => Ok(StdRep::Projective(num(i)?)),
            ("injective", [i]) => Ok(StdRep::Injective(num(i)?)),
            ("regular", [p, n]) => Ok(StdRep::Regular(p.parse()?, num(n)?)),
            ("preprojective", [n]) => Ok(StdRep::Preprojective(num(n)?)),
            ("preinjective", [n]) => Ok(StdRep::Preinjective(num(n)?)),
            _ => Err(bad()),
        }
    }
}

fn jordan(n: usize, lambda: &Rat) -> QMat {
    QMat::from_fn(n, n, |i, j| {
        if i == j {
            lambda.clone()
        } else if i + 1 == j {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

pub fn standard_reps(kind: &StdRep) -> Result<KronRep, QuiverError> {
    let invalid = || Err(QuiverError::InvalidKind(kind.to_string()));
    Ok(match kind {
        StdRep::SimpleProjective => preprojective(0),
        StdRep::SimpleInjective => preinjective(0),
        StdRep::Projective(1) => preprojective(1),
        StdRep::Projective(2) => preprojective(0),
        StdRep::Injective(1) => preinjective(0),
        StdRep::Injective(2) => preinjective(1),
        StdRep::Projective(_) | StdRep::Injective(_) => return invalid(),
        StdRep::Regular(_, 0) => return invalid(),
        StdRep::Regular(Point::Finite(l), n) => {
            KronRep { d1: *n, d2: *n, f: QMat::identity(*n), g: jordan(*n, l) }
        }
        StdRep::Regular(Point::Infinity, n) => {
            KronRep { d1: *n, d2: *n, f: jordan(*n, &Rat::zero()), g: QMat::identity(*n) }
        }
        StdRep::Preprojective(n) => preprojective(*n),
        StdRep::Preinjective(n) => preinjective(*n),
    })
}

/// `f(eᵢ) = wᵢ`, `g(eᵢ) = wᵢ₊₁`.
fn preprojective(n: usize) -> KronRep {
    let f = QMat::from_fn(n + 1, n, |i, j| if i == j { Rat::one() } else { Rat::zero() });
    let g = QMat::from_fn(n + 1, n, |i, j| if i == j + 1 { Rat::one() } else { Rat::zero() });
    KronRep { d1: n, d2: n + 1, f, g }
}

/// `f = [I | 0]`, `g = [0 | I]`.
fn preinjective(n: usize) -> KronRep {
    let f = QMat::from_fn(n, n + 1, |i, j| if i == j { Rat::one() } else { Rat::zero() });
    let g = QMat::from_fn(n, n + 1, |i, j| if j == i + 1 { Rat::one() } else { Rat::zero() });
    KronRep { d1: n + 1, d2: n, f, g }
}

#[derive(Clone, Debug)]
pub struct HomExtRep {
    pub hom_basis: Vec<RepMap>,
    pub ext1_dim: usize,
    /// One middle term per basis class of `Ext¹(M, N)`, as `0 → N → E → M → 0`.
    pub ext1_reps: Vec<KronRep>,
}

pub fn hom_ext_rep(m: &KronRep, n: &KronRep) -> HomExtRep {
    let (rm, rn) = (m.to_rep(), n.to_rep());
    let he = rep::hom_ext(&rm, &rn);
    let hreps = he.hom.reps();
    let hom_basis = (0..hreps.cols())
        .map(|j| RepMap::from_morphism(&Morphism::from_vec(&rm, &rn, &hreps.col(j))))
        .collect();
    let ereps = he.ext.reps();
    let ext1_reps = (0..ereps.cols()).map(|j| KronRep::from_rep(&rep::extension(&rm, &rn, &ereps.col(j)))).collect();
    HomExtRep { hom_basis, ext1_dim: he.ext.dim(), ext1_reps }
}

pub fn hom_dim(m: &KronRep, n: &KronRep) -> usize {
    rep::hom_ext(&m.to_rep(), &n.to_rep()).hom.dim()
}

/// `⟨M, N⟩ = dim Hom − dim Ext¹` for the Kronecker quiver.
pub fn euler_form(m: &KronRep, n: &KronRep) -> i64 {
    (m.d1 * n.d1 + m.d2 * n.d2) as i64 - 2 * (m.d1 * n.d2) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(s: &str) -> KronRep {
        standard_reps(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn named_dimension_vectors() {
        assert_eq!(std("simple_injective").dims(), (1, 0));
        assert_eq!(std("simple_projective").dims(), (0, 1));
        assert_eq!(std("projective(1)").dims(), (1, 2));
        assert_eq!(std("injective(2)").dims(), (2, 1));
        let r = std("regular(inf,1)");
        assert_eq!((r.f.clone(), r.g.clone()), (QMat::from_ints(1, 1, &[0]), QMat::from_ints(1, 1, &[1])));
        assert!(matches!("projective(3)".parse::<StdRep>().map(|k| standard_reps(&k)), Ok(Err(_))));
        assert!("bogus".parse::<StdRep>().is_err());
    }

    #[test]
    fn regular_blocks_have_the_named_eigenvalue() {
        for lam in [-1i64, 0, 2] {
            let r = std(&format!("regular({lam},3)"));
            let m = r.g.sub(&r.f.scale(&Rat::int(lam)));
            assert!(m.pow(2).rank() > 0 && m.pow(3).is_zero());
        }
        let r = std("regular(inf,3)");
        assert!(r.g.is_invertible());
        let y = r.f.mul(&r.g.inverse().unwrap());
        assert!(!y.pow(2).is_zero() && y.pow(3).is_zero());
    }

    #[test]
    fn hom_ext_examples() {
        let r = std("regular(inf,1)");
        let he = hom_ext_rep(&r, &r);
        assert_eq!((he.hom_basis.len(), he.ext1_dim), (1, 1));
        let e = &he.ext1_reps[0];
        assert_eq!(e.dims(), (2, 2));
        assert!(hom_dim(e, e) < 4, "the extension class must be non-split");

        let p = std("simple_projective");
        for k in ["regular(0,2)", "injective(2)", "projective(1)"] {
            assert_eq!(hom_ext_rep(&p, &std(k)).ext1_dim, 0);
        }

        let v = KronRep::from_ints(1, 1, &[1], &[0]);
        for n in 1..4 {
            let nn = KronRep { d1: n, d2: n, f: QMat::identity(n), g: QMat::zeros(n, n) };
            assert_eq!(hom_ext_rep(&v, &nn).ext1_dim, n);
        }
    }

    #[test]
    fn serde_shape() {
        let r = std("projective(1)");
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"d1":1,"d2":2,"F":[["1"],["0"]],"G":[["0"],["1"]]}"#);
        let back: KronRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let z: KronRep = serde_json::from_str(r#"{"d1":0,"d2":1,"F":[[]],"G":[[]]}"#).unwrap();
        assert_eq!(z, std("simple_projective"));
        assert!(serde_json::from_str::<KronRep>(r#"{"d1":1,"d2":1,"F":[["1","2"]],"G":[["0"]]}"#).is_err());
    }
}
