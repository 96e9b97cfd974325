//! Integer matrices of the modular group up to sign, the generator
//! identities behind the symmetry argument, and explicit words in the two
//! homography generators reaching any rational from 0.

use crate::error::{Error, Result};
use std::fmt;

/// An integer 2×2 matrix of determinant ±1, identified up to global sign.
/// Equality normalizes the sign first (first nonzero entry positive).
#[derive(Debug, Clone, Copy)]
pub struct ProjectiveMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ProjectiveMatrix {
    pub const I: ProjectiveMatrix = ProjectiveMatrix::raw(1, 0, 0, 1);
    pub const S: ProjectiveMatrix = ProjectiveMatrix::raw(0, -1, 1, 0);
    pub const T: ProjectiveMatrix = ProjectiveMatrix::raw(1, 1, 0, 1);
    /// The homography x ↦ (2x−1)/x.
    pub const A: ProjectiveMatrix = ProjectiveMatrix::raw(2, -1, 1, 0);
    /// The homography x ↦ (1−x)/x.
    pub const B: ProjectiveMatrix = ProjectiveMatrix::raw(-1, 1, 1, 0);
    pub const B2: ProjectiveMatrix = ProjectiveMatrix::raw(2, -1, -1, 1);
    /// The conjugator S⁻¹T⁻¹.
    pub const P: ProjectiveMatrix = ProjectiveMatrix::raw(0, 1, -1, 1);

    const fn raw(a: i64, b: i64, c: i64, d: i64) -> ProjectiveMatrix {
        ProjectiveMatrix { a, b, c, d }
    }

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<ProjectiveMatrix> {
        let m = ProjectiveMatrix::raw(a, b, c, d);
        if m.det().abs() != 1 {
            return Err(Error::Input(format!(
                "matrix {m} has determinant {}, expected ±1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    fn normalized_entries(&self) -> [i64; 4] {
        let e = [self.a, self.b, self.c, self.d];
        match e.iter().find(|v| **v != 0) {
            Some(v) if *v < 0 => [-e[0], -e[1], -e[2], -e[3]],
            _ => e,
        }
    }

    pub fn mul(&self, rhs: &ProjectiveMatrix) -> ProjectiveMatrix {
        ProjectiveMatrix::raw(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    /// The adjugate, which inverts up to the ±1 determinant.
    pub fn inverse(&self) -> ProjectiveMatrix {
        ProjectiveMatrix::raw(self.d, -self.b, -self.c, self.a)
    }

    /// T^k without iteration.
    pub fn t_power(k: i64) -> ProjectiveMatrix {
        ProjectiveMatrix::raw(1, k, 0, 1)
    }

    /// Action on homogeneous coordinates: [p:q] ↦ [ap+bq : cp+dq].
    pub fn apply(&self, p: i64, q: i64) -> (i64, i64) {
        (self.a * p + self.b * q, self.c * p + self.d * q)
    }
}

impl PartialEq for ProjectiveMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.normalized_entries() == other.normalized_entries()
    }
}

impl Eq for ProjectiveMatrix {}

impl fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Alphabet of the homography generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    A,
    AInv,
    B2,
    B2Inv,
}

impl Letter {
    fn matrix(&self) -> ProjectiveMatrix {
        match self {
            Letter::A => ProjectiveMatrix::A,
            Letter::AInv => ProjectiveMatrix::A.inverse(),
            Letter::B2 => ProjectiveMatrix::B2,
            Letter::B2Inv => ProjectiveMatrix::B2.inverse(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Letter::A => "A",
            Letter::AInv => "A^-1",
            Letter::B2 => "B^2",
            Letter::B2Inv => "B^-2",
        };
        write!(f, "{text}")
    }
}

/// A word over {A, A⁻¹, B², B⁻²}, evaluated by left-to-right multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomographyWord(pub Vec<Letter>);

impl HomographyWord {
    pub fn evaluate(&self) -> ProjectiveMatrix {
        self.0
            .iter()
            .fold(ProjectiveMatrix::I, |acc, l| acc.mul(&l.matrix()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for HomographyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let words: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
}

/// The generator identities, verified in exact integer arithmetic up to sign.
pub fn modular_group_check() -> Vec<IdentityCheck> {
    use ProjectiveMatrix as M;
    let p_inv = M::P.inverse();
    let b2_inv = M::B2.inverse();
    let st = M::S.mul(&M::T);
    let checks: Vec<(String, M, M)> = vec![
        ("S^2 = I".into(), M::S.mul(&M::S), M::I),
        ("(ST)^3 = I".into(), st.mul(&st).mul(&st), M::I),
        (
            "P = S^-1 T^-1".into(),
            M::S.inverse().mul(&M::T.inverse()),
            M::P,
        ),
        (
            "P A P^-1 = T^-1".into(),
            M::P.mul(&M::A).mul(&p_inv),
            M::T.inverse(),
        ),
        (
            "P B^-2 P^-1 = [[3,-1],[1,0]]".into(),
            M::P.mul(&b2_inv).mul(&p_inv),
            M::raw(3, -1, 1, 0),
        ),
        (
            "T = B^2 A^-1 B^-2".into(),
            M::B2.mul(&M::A.inverse()).mul(&b2_inv),
            M::T,
        ),
        (
            "S = B^2 A B^-2 A^2 B^-2".into(),
            M::B2
                .mul(&M::A)
                .mul(&b2_inv)
                .mul(&M::A)
                .mul(&M::A)
                .mul(&b2_inv),
            M::S,
        ),
    ];
    checks
        .into_iter()
        .map(|(name, lhs, rhs)| IdentityCheck {
            name,
            pass: lhs == rhs,
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum StFactor {
    S,
    T(i64),
}

/// Nearest-integer division, minimizing |a − n·c|.
fn div_round(a: i64, c: i64) -> i64 {
    let q = a.div_euclid(c);
    let r = a.rem_euclid(c);
    if 2 * r >= c.abs() {
        q + c.signum()
    } else {
        q
    }
}

/// Peels a determinant-one matrix into S and T factors by the Euclidean
/// algorithm on its first column.
fn st_word(g: &ProjectiveMatrix) -> Vec<StFactor> {
    debug_assert_eq!(g.det(), 1);
    let s_inv = ProjectiveMatrix::S.inverse();
    let mut m = *g;
    let mut word = Vec::new();
    while m.c != 0 {
        let n = div_round(m.a, m.c);
        if n != 0 {
            word.push(StFactor::T(n));
            m = ProjectiveMatrix::t_power(-n).mul(&m);
        }
        word.push(StFactor::S);
        m = s_inv.mul(&m);
    }
    let k = m.b * m.d;
    if k != 0 {
        word.push(StFactor::T(k));
    }
    word
}

/// Rewrites S and T factors over the homography alphabet via
/// S = B²AB⁻²A²B⁻² and T^k = B²A^{−k}B⁻².
fn substitute(factors: &[StFactor]) -> HomographyWord {
    let mut letters = Vec::new();
    for f in factors {
        match f {
            StFactor::S => letters.extend([
                Letter::B2,
                Letter::A,
                Letter::B2Inv,
                Letter::A,
                Letter::A,
                Letter::B2Inv,
            ]),
            StFactor::T(k) => {
                letters.push(Letter::B2);
                let letter = if *k > 0 { Letter::AInv } else { Letter::A };
                letters.extend(std::iter::repeat(letter).take(k.unsigned_abs() as usize));
                letters.push(Letter::B2Inv);
            }
        }
    }
    HomographyWord(letters)
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// A group element and generator word sending [0:1] to [p:q].
#[derive(Debug, Clone)]
pub struct OrbitWitness {
    pub target: (i64, i64),
    pub matrix: ProjectiveMatrix,
    pub word: HomographyWord,
}

impl OrbitWitness {
    pub fn maps_zero_to_target(&self) -> bool {
        let hit = self.matrix.apply(0, 1);
        hit == self.target || hit == (-self.target.0, -self.target.1)
    }

    pub fn word_matches(&self) -> bool {
        self.word.evaluate() == self.matrix
    }
}

/// Reaches the reduced fraction p/q (or [1:0] when q = 0) from 0: the matrix
/// column trick from the extended gcd, then a word in the two generators.
pub fn orbit_witness(p: i64, q: i64) -> Result<OrbitWitness> {
    if (p, q) == (0, 0) {
        return Err(Error::Input("the point [0:0] is not projective".into()));
    }
    let (g, x0, y0) = extended_gcd(q, p);
    if g != 1 {
        return Err(Error::Input(format!(
            "{p}/{q} is not reduced: gcd {g}"
        )));
    }
    let matrix = if q == 0 {
        ProjectiveMatrix::raw(0, 1, -1, 0)
    } else {
        // x·q − y·p = 1 makes [[x,p],[y,q]] a determinant-one matrix.
        ProjectiveMatrix::new(x0, p, -y0, q)?
    };
    let word = substitute(&st_word(&matrix));
    Ok(OrbitWitness {
        target: (p, q),
        matrix,
        word,
    })
}
