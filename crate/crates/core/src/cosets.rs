//! Double cosets of PGL(n+1) under GL(n) and mirabolic subgroups, verified
//! by enumeration over small prime fields, plus index, valuation and
//! factorization checks over residue rings and rational-function fields.

use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symfunc::{Registry, RF};

/// Default cap on the number of group elements an audit may enumerate.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not a prime")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

/// Inverse modulo `m`, if `a` is a unit.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// `p`-adic valuation of `x` in `Z/p^k`; zero has valuation `k`.
pub fn valuation(x: u64, p: u64, k: u32) -> u32 {
    let mut x = x;
    let mut v = 0;
    while v < k && x.is_multiple_of(p) {
        if x == 0 {
            return k;
        }
        x /= p;
        v += 1;
    }
    v
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], true)];
    }
    let mut out = Vec::new();
    for (perm, even) in permutations(n - 1) {
        for pos in 0..n {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            // inserting at `pos` moves the new element past n-1-pos others
            let flips = n - 1 - pos;
            out.push((p, even == flips.is_multiple_of(2)));
        }
    }
    out
}

/// Square matrix over `Z/m`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    size: usize,
    entries: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.size)
            .map(|i| {
                let r: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
                r.join(" ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl Mat {
    pub fn identity(size: usize) -> Self {
        let mut m = Mat {
            size,
            entries: vec![0; size * size],
        };
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>], modulus: u64) -> Self {
        let size = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), size, "square matrix expected");
                r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64)
            })
            .collect();
        Mat { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.size + j] = v;
    }

    pub fn mul(&self, other: &Mat, m: u64) -> Mat {
        let n = self.size;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + a * other.get(k, j)) % m;
                }
            }
        }
        Mat {
            size: n,
            entries: out,
        }
    }

    pub fn scale(&self, c: u64, m: u64) -> Mat {
        Mat {
            size: self.size,
            entries: self.entries.iter().map(|&x| x * c % m).collect(),
        }
    }

    pub fn det(&self, m: u64) -> u64 {
        det_of(self.size, |i, j| self.get(i, j), m)
    }

    /// Top-left `n x n` block.
    pub fn block_a(&self) -> Mat {
        let n = self.size - 1;
        let mut a = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, self.get(i, j));
            }
        }
        a
    }

    /// `diag(g, 1)`.
    pub fn embed(g: &Mat) -> Mat {
        let mut m = Mat::identity(g.size + 1);
        for i in 0..g.size {
            for j in 0..g.size {
                m.set(i, j, g.get(i, j));
            }
        }
        m
    }

    /// Adjugate: `adj(a) a = det(a) I`.
    pub fn adjugate(&self, m: u64) -> Mat {
        let n = self.size;
        let mut out = Mat::identity(n);
        if n == 1 {
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                // cofactor C_{ji}
                let minor = det_of(
                    n - 1,
                    |r, c| {
                        let rr = if r >= j { r + 1 } else { r };
                        let cc = if c >= i { c + 1 } else { c };
                        self.get(rr, cc)
                    },
                    m,
                );
                let v = if (i + j) % 2 == 0 {
                    minor
                } else {
                    (m - minor) % m
                };
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn inverse(&self, m: u64) -> Option<Mat> {
        let d = inv_mod(self.det(m), m)?;
        Some(self.adjugate(m).scale(d, m))
    }

    /// Rank over the prime field `F_p`.
    pub fn rank(&self, p: u64) -> usize {
        let n = self.size;
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = inv_mod(rows[rank][col], p).expect("nonzero in a field");
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let f = row[col] * inv % p;
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + p * p - f * y % p) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Scales so that the first nonzero entry in reading order is 1.
    pub fn projective_canonical(&self, p: u64) -> Mat {
        match self.entries.iter().find(|&&x| x != 0) {
            Some(&x) if x != 1 => self.scale(inv_mod(x, p).expect("field element"), p),
            _ => self.clone(),
        }
    }

    /// Base-`p` packing of the entries.
    pub fn code(&self, p: u64) -> u64 {
        self.entries.iter().rev().fold(0, |acc, &x| acc * p + x)
    }

    pub fn from_code(mut code: u64, size: usize, p: u64) -> Mat {
        let entries = (0..size * size)
            .map(|_| {
                let x = code % p;
                code /= p;
                x
            })
            .collect();
        Mat { size, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

type SignedPerms = Rc<Vec<(Vec<usize>, bool)>>;

fn det_of(n: usize, get: impl Fn(usize, usize) -> u64, m: u64) -> u64 {
    thread_local! {
        static PERMS: RefCell<HashMap<usize, SignedPerms>> = RefCell::new(HashMap::new());
    }
    let perms = PERMS.with(|c| {
        c.borrow_mut()
            .entry(n)
            .or_insert_with(|| Rc::new(permutations(n)))
            .clone()
    });
    let mut acc: u64 = 0;
    for (perm, even) in perms.iter() {
        let mut t = 1u64;
        for (i, &j) in perm.iter().enumerate() {
            t = t * get(i, j) % m;
            if t == 0 {
                break;
            }
        }
        acc = if *even {
            (acc + t) % m
        } else {
            (acc + m - t) % m
        };
    }
    acc
}

/// Tagged double-coset representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetClass {
    E,
    NPlus,
    NMinus,
    XiPerp,
    WPrime,
    NPlusWPrime,
    WPrimeNPlus,
    Xi(u64),
}

impl fmt::Display for CosetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetClass::E => write!(f, "e"),
            CosetClass::NPlus => write!(f, "n+"),
            CosetClass::NMinus => write!(f, "n-"),
            CosetClass::XiPerp => write!(f, "xi_perp"),
            CosetClass::WPrime => write!(f, "w'"),
            CosetClass::NPlusWPrime => write!(f, "n+w'"),
            CosetClass::WPrimeNPlus => write!(f, "w'n+"),
            CosetClass::Xi(t) => write!(f, "xi({t})"),
        }
    }
}

/// Block pieces `a` (n×n), `b` (column), `c` (row), `d` of a matrix of size n+1.
struct Blocks {
    a: Mat,
    b: Vec<u64>,
    c: Vec<u64>,
    d: u64,
}

fn blocks(g: &Mat) -> Blocks {
    let n = g.size - 1;
    Blocks {
        a: g.block_a(),
        b: (0..n).map(|i| g.get(i, n)).collect(),
        c: (0..n).map(|j| g.get(n, j)).collect(),
        d: g.get(n, n),
    }
}

/// `c · M · b` modulo `m`.
fn row_mat_col(c: &[u64], mat: &Mat, b: &[u64], m: u64) -> u64 {
    let mut acc = 0;
    for (i, &ci) in c.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            acc = (acc + ci * mat.get(i, j) % m * bj) % m;
        }
    }
    acc
}

/// Classifies `γ ∈ PGL_{n+1}(F_p)` under the bilateral `G_n × G_n` action by
/// the block invariants of a lift `(a, b; c, d)`.
pub fn classify(g: &Mat, p: u64) -> Result<CosetClass> {
    let n = g.size - 1;
    check_n(n)?;
    let det = g.det(p);
    if det == 0 {
        return Err(Error::Domain("singular matrix".into()));
    }
    let Blocks { a, b, c, d } = blocks(g);
    let b_zero = b.iter().all(|&x| x == 0);
    let c_zero = c.iter().all(|&x| x == 0);
    match a.rank(p) {
        r if r == n => {
            if d == 0 {
                return Ok(CosetClass::NPlusWPrime);
            }
            match (b_zero, c_zero) {
                (true, true) => return Ok(CosetClass::E),
                (false, true) => return Ok(CosetClass::NPlus),
                (true, false) => return Ok(CosetClass::NMinus),
                _ => {}
            }
            let det_a = a.det(p);
            let a_inv = a.inverse(p).expect("full rank");
            let cab = row_mat_col(&c, &a_inv, &b, p);
            if cab == 0 {
                return Ok(CosetClass::XiPerp);
            }
            let t = cab * inv_mod(d, p).expect("nonzero") % p;
            if t == 1 {
                return Err(Error::Inconsistent(
                    "orbit invariant t = 1 on an invertible matrix".into(),
                ));
            }
            if det != det_a * d % p * ((1 + p - t) % p) % p {
                return Err(Error::Inconsistent("det γ ≠ det(a)·d·(1 - t)".into()));
            }
            Ok(CosetClass::Xi(t))
        }
        r if r + 1 == n => Ok(if d == 0 {
            CosetClass::WPrime
        } else {
            CosetClass::WPrimeNPlus
        }),
        r => Err(Error::Inconsistent(format!(
            "top-left block of rank {r} < n - 1 in an invertible matrix"
        ))),
    }
}

/// The representative matrix of a class.
pub fn representative(class: CosetClass, n: usize, p: u64) -> Mat {
    let mut m = Mat::identity(n + 1);
    let last = n - 1;
    match class {
        CosetClass::E => {}
        CosetClass::NPlus => m.set(last, n, 1),
        CosetClass::NMinus => m.set(n, last, 1),
        CosetClass::Xi(t) => {
            m.set(last, n, t % p);
            m.set(n, last, 1);
        }
        CosetClass::XiPerp => {
            m.set(0, n, 1);
            m.set(n, last, 1);
        }
        CosetClass::WPrime => {
            m.set(last, last, 0);
            m.set(n, n, 0);
            m.set(last, n, 1);
            m.set(n, last, 1);
        }
        CosetClass::NPlusWPrime => {
            return representative(CosetClass::NPlus, n, p)
                .mul(&representative(CosetClass::WPrime, n, p), p)
        }
        CosetClass::WPrimeNPlus => {
            return representative(CosetClass::WPrime, n, p)
                .mul(&representative(CosetClass::NPlus, n, p), p)
        }
    }
    m
}

/// All classes expected over `F_p`.
pub fn expected_classes(p: u64) -> Vec<CosetClass> {
    let mut v = vec![
        CosetClass::E,
        CosetClass::NPlus,
        CosetClass::NMinus,
        CosetClass::XiPerp,
        CosetClass::WPrime,
        CosetClass::NPlusWPrime,
        CosetClass::WPrimeNPlus,
    ];
    v.extend((2..p).map(CosetClass::Xi));
    v
}

/// `|GL_k(F_q)|`.
pub fn gl_order(k: usize, q: u64) -> u128 {
    let qk = (q as u128).pow(k as u32);
    (0..k).map(|i| qk - (q as u128).pow(i as u32)).product()
}

/// `|PGL_k(F_q)|`.
pub fn pgl_order(k: usize, q: u64) -> u128 {
    gl_order(k, q) / (q as u128 - 1)
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let factors: Vec<u64> = (2..=phi)
        .filter(|&d| phi.is_multiple_of(d) && is_prime(d))
        .collect();
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, phi / f, p) != 1))
        .expect("prime fields have primitive roots")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Generators of `GL_n(F_p)`: transvections, one diagonal scaling by a
/// primitive root, and the cyclic permutation.
pub fn gl_generators(n: usize, p: u64) -> Vec<Mat> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Mat::identity(n);
                m.set(i, j, 1);
                gens.push(m);
            }
        }
    }
    let w = primitive_root(p);
    if w != 1 {
        let mut m = Mat::identity(n);
        m.set(0, 0, w);
        gens.push(m);
    }
    if n > 1 {
        let mut m = Mat::identity(n);
        for i in 0..n {
            m.set(i, i, 0);
            m.set(i, (i + 1) % n, 1);
        }
        gens.push(m);
    }
    gens
}

/// Generators of the mirabolic subgroup `P_{n+1}`: `diag(g, 1)` for the
/// generators of `GL_n` and the translations `(I, e_i^T; 0, 1)`.
pub fn mirabolic_generators(n: usize, p: u64) -> Vec<Mat> {
    let mut gens: Vec<Mat> = gl_generators(n, p).iter().map(Mat::embed).collect();
    for i in 0..n {
        let mut m = Mat::identity(n + 1);
        m.set(i, n, 1);
        gens.push(m);
    }
    gens
}

/// Every element of `GL_n(F_p)`, in code order.
pub fn enumerate_gl(n: usize, p: u64, budget: u128) -> Result<Vec<Mat>> {
    let needed = (p as u128).pow((n * n) as u32);
    if needed > budget.max(1) * 64 {
        return Err(Error::Budget { needed, budget });
    }
    Ok((0..needed as u64)
        .map(|c| Mat::from_code(c, n, p))
        .filter(|m| m.det(p) != 0)
        .collect())
}

/// Every element of `PGL_{n+1}(F_p)` as a projectively canonical matrix, in
/// code order.
pub fn enumerate_pgl(n: usize, p: u64, budget: u128) -> Result<Vec<Mat>> {
    let k = n + 1;
    let needed = pgl_order(k, p);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let total = p.pow((k * k) as u32);
    let mut out = Vec::with_capacity(needed as usize);
    for c in 0..total {
        let m = Mat::from_code(c, k, p);
        if m.entries.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        if m.det(p) != 0 {
            out.push(m);
        }
    }
    Ok(out)
}

/// Which subgroups act on the left and right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    GxG,
    PxG,
    GxP,
    PxP,
}

impl Variant {
    fn generators(self, n: usize, p: u64) -> (Vec<Mat>, Vec<Mat>) {
        let g: Vec<Mat> = gl_generators(n, p).iter().map(Mat::embed).collect();
        let pm = mirabolic_generators(n, p);
        match self {
            Variant::GxG => (g.clone(), g),
            Variant::PxG => (pm, g),
            Variant::GxP => (g, pm),
            Variant::PxP => (pm.clone(), pm),
        }
    }

    /// Representatives predicted for the variant.
    pub fn representatives(self, p: u64) -> Vec<CosetClass> {
        match self {
            Variant::GxG => expected_classes(p),
            Variant::PxG | Variant::GxP => {
                vec![CosetClass::E, CosetClass::NMinus, CosetClass::WPrime]
            }
            Variant::PxP => vec![CosetClass::E, CosetClass::WPrime],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::GxG => "GxG",
            Variant::PxG => "PxG",
            Variant::GxP => "GxP",
            Variant::PxP => "PxP",
        };
        write!(f, "{s}")
    }
}

/// Orbit decomposition of `elements` under `γ ↦ l γ` and `γ ↦ γ r` for the
/// given generators, returning the orbit index of each element.
fn orbits(elements: &[Mat], left: &[Mat], right: &[Mat], p: u64) -> Result<(Vec<u32>, Vec<u64>)> {
    let index: HashMap<u64, u32> = elements
        .iter()
        .enumerate()
        .map(|(i, m)| (m.code(p), i as u32))
        .collect();
    let mut orbit_of = vec![u32::MAX; elements.len()];
    let mut sizes = Vec::new();
    for start in 0..elements.len() {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        let mut size = 0u64;
        let mut queue = VecDeque::from([start]);
        orbit_of[start] = id;
        while let Some(i) = queue.pop_front() {
            size += 1;
            let g = &elements[i];
            let nexts = left
                .iter()
                .map(|l| l.mul(g, p))
                .chain(right.iter().map(|r| g.mul(r, p)));
            for h in nexts {
                let key = h.projective_canonical(p).code(p);
                let j = *index
                    .get(&key)
                    .ok_or_else(|| Error::Inconsistent("orbit left the enumerated group".into()))?
                    as usize;
                if orbit_of[j] == u32::MAX {
                    orbit_of[j] = id;
                    queue.push_back(j);
                }
            }
        }
        sizes.push(size);
    }
    Ok((orbit_of, sizes))
}

/// One class in an orbit report.
#[derive(Clone, Debug)]
pub struct ClassOrbit {
    pub class: CosetClass,
    pub orbit_size: u64,
    /// Stabilizer order measured by counting, when computed.
    pub stabilizer: Option<u64>,
    /// Order of the subgroup the stabilizer is identified with, when known.
    pub expected_stabilizer: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub n: usize,
    pub q: u64,
    pub variant: Variant,
    pub group_order: u64,
    pub expected_group_order: u64,
    pub orbit_count: usize,
    /// Classes in representative order with their orbit data.
    pub classes: Vec<ClassOrbit>,
    /// `classify` is constant on every orbit (GxG only).
    pub classify_constant: bool,
    /// Each predicted representative lies in its own orbit and together they
    /// meet every orbit.
    pub representatives_separate: bool,
    /// Number of elements classified as `xi(0)` or `xi(1)`.
    pub forbidden_xi: u64,
    /// Named matrix identities checked along the way.
    pub identities: Vec<(String, bool)>,
}

impl OrbitReport {
    pub fn orbit_sum(&self) -> u64 {
        self.classes.iter().map(|c| c.orbit_size).sum()
    }

    pub fn passes(&self) -> bool {
        let expected = self.variant.representatives(self.q).len();
        self.group_order == self.expected_group_order
            && self.orbit_sum() == self.group_order
            && self.orbit_count == expected
            && self.classify_constant
            && self.representatives_separate
            && self.forbidden_xi == 0
            && self.identities.iter().all(|(_, ok)| *ok)
    }
}

fn orbit_audit(n: usize, p: u64, variant: Variant, budget: u128) -> Result<OrbitReport> {
    check_n(n)?;
    check_prime(p)?;
    let elements = enumerate_pgl(n, p, budget)?;
    let (left, right) = variant.generators(n, p);
    let (orbit_of, sizes) = orbits(&elements, &left, &right, p)?;
    let index: HashMap<u64, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, m)| (m.code(p), i))
        .collect();
    let reps = variant.representatives(p);
    let mut rep_orbits = Vec::new();
    let mut classes = Vec::new();
    for &class in &reps {
        let m = representative(class, n, p).projective_canonical(p);
        let i = index[&m.code(p)];
        rep_orbits.push(orbit_of[i]);
        classes.push(ClassOrbit {
            class,
            orbit_size: sizes[orbit_of[i] as usize],
            stabilizer: None,
            expected_stabilizer: None,
        });
    }
    let mut distinct = rep_orbits.clone();
    distinct.sort();
    distinct.dedup();
    let representatives_separate = distinct.len() == reps.len() && distinct.len() == sizes.len();

    let mut classify_constant = true;
    let mut forbidden_xi = 0;
    if variant == Variant::GxG {
        let mut orbit_class: HashMap<u32, CosetClass> = HashMap::new();
        for (m, &o) in elements.iter().zip(&orbit_of) {
            let c = classify(m, p)?;
            if matches!(c, CosetClass::Xi(0) | CosetClass::Xi(1)) {
                forbidden_xi += 1;
            }
            match orbit_class.get(&o) {
                Some(&prev) if prev != c => classify_constant = false,
                Some(_) => {}
                None => {
                    orbit_class.insert(o, c);
                }
            }
        }
        for (class, o) in reps.iter().zip(&rep_orbits) {
            if orbit_class.get(o) != Some(class) {
                classify_constant = false;
            }
        }
    }
    Ok(OrbitReport {
        n,
        q: p,
        variant,
        group_order: elements.len() as u64,
        expected_group_order: pgl_order(n + 1, p) as u64,
        orbit_count: sizes.len(),
        classes,
        classify_constant,
        representatives_separate,
        forbidden_xi,
        identities: Vec::new(),
    })
}

/// Exhaustive `G_n × G_n` orbit decomposition of `PGL_{n+1}(F_p)`.
pub fn exhaustive_partition_audit(n: usize, p: u64, budget: u128) -> Result<OrbitReport> {
    orbit_audit(n, p, Variant::GxG, budget)
}

/// Number of `(x, y) ∈ G_n²` with `diag(x,1)^{-1} ξ diag(y,1) ∝ ξ`.
///
/// For each `y`, `ξ diag(y,1) ξ^{-1}` must be a scalar multiple of some
/// `diag(x,1)`, which then determines `x`.
pub fn stabilizer_order(xi: &Mat, gl: &[Mat], p: u64) -> Result<u64> {
    let xi_inv = xi
        .inverse(p)
        .ok_or_else(|| Error::Domain("singular representative".into()))?;
    let n = xi.size - 1;
    let mut count = 0;
    for y in gl {
        let m = xi.mul(&Mat::embed(y), p).mul(&xi_inv, p);
        let lam = m.get(n, n);
        if lam == 0 {
            continue;
        }
        let off_block = (0..n).all(|i| m.get(i, n) == 0 && m.get(n, i) == 0);
        if off_block {
            count += 1;
        }
    }
    Ok(count)
}

/// Orders the stabilizers are identified with: `G_n` for `e`, `P_n` for
/// `n±`, `G_{n-1}` for `ξ(t)`, and `R` with `|R| = |G_{n-2}| q^{2n-3}` for `ξ⊥`.
pub fn expected_stabilizer(class: CosetClass, n: usize, q: u64) -> Option<u64> {
    let gl = |k: usize| gl_order(k, q) as u64;
    match class {
        CosetClass::E => Some(gl(n)),
        CosetClass::NPlus | CosetClass::NMinus => Some(gl(n - 1) * q.pow(n as u32 - 1)),
        CosetClass::Xi(_) => Some(gl(n - 1)),
        CosetClass::XiPerp => Some(gl(n - 2) * q.pow(2 * n as u32 - 3)),
        _ => None,
    }
}

/// Partition audit plus stabilizer counts for every representative.
pub fn stabilizer_audit(n: usize, p: u64, budget: u128) -> Result<OrbitReport> {
    let mut report = exhaustive_partition_audit(n, p, budget)?;
    let gl = enumerate_gl(n, p, budget)?;
    let g2 = (gl.len() as u64).pow(2);
    for c in &mut report.classes {
        let s = stabilizer_order(&representative(c.class, n, p), &gl, p)?;
        c.stabilizer = Some(s);
        c.expected_stabilizer = expected_stabilizer(c.class, n, p);
        report.identities.push((
            format!("orbit-stabilizer {}", c.class),
            c.orbit_size * s == g2,
        ));
    }
    Ok(report)
}

/// The matrix identities that fold `ξ(t)`, `ξ⊥`, `w'n⁺` and `n⁺w'` into
/// mirabolic translates of `n⁻`. Each entry is `(name, holds)`.
///
/// The `n⁺w'` identity is checked as `n⁺w' = -n⁻ (-I_n, -e_n^T; 0, 1)`.
pub fn reduction_identities(n: usize, p: u64) -> Vec<(String, bool)> {
    let k = n + 1;
    let last = n - 1;
    let nm = representative(CosetClass::NMinus, n, p);
    let in_mirabolic = |m: &Mat| (0..n).all(|j| m.get(n, j) == 0) && m.get(n, n) == 1;
    let proj_eq = |a: &Mat, b: &Mat| a.projective_canonical(p) == b.projective_canonical(p);
    let mut out = Vec::new();

    for t in 2..p {
        let xi = representative(CosetClass::Xi(t), n, p);
        let mut left = Mat::identity(k);
        left.set(last, last, (1 + p - t) % p);
        left.set(last, n, t);
        let s = inv_mod((1 + p - t) % p, p).expect("t ≠ 1");
        let mut right = Mat::identity(k);
        for i in 0..n {
            right.set(i, i, s);
        }
        right.set(last, n, s * t % p);
        out.push((
            format!("xi({t}) = p n-"),
            in_mirabolic(&left) && left.mul(&nm, p) == xi,
        ));
        out.push((
            format!("xi({t}) = n- p"),
            in_mirabolic(&right) && proj_eq(&nm.mul(&right, p), &xi),
        ));
    }

    let xp = representative(CosetClass::XiPerp, n, p);
    let mut left = Mat::identity(k);
    left.set(0, last, p - 1);
    left.set(0, n, 1);
    let mut right = Mat::identity(k);
    right.set(0, n, 1);
    out.push((
        "xi_perp = p n-".into(),
        in_mirabolic(&left) && left.mul(&nm, p) == xp,
    ));
    out.push((
        "xi_perp = n- p".into(),
        in_mirabolic(&right) && nm.mul(&right, p) == xp,
    ));

    let wn = representative(CosetClass::WPrimeNPlus, n, p);
    let mut left = Mat::identity(k);
    left.set(last, last, p - 1);
    left.set(last, n, 1);
    out.push((
        "w'n+ = p n-".into(),
        in_mirabolic(&left) && left.mul(&nm, p) == wn,
    ));

    let nw = representative(CosetClass::NPlusWPrime, n, p);
    let mut right = Mat::identity(k).scale(p - 1, p);
    right.set(last, n, p - 1);
    right.set(n, n, 1);
    out.push((
        "n+w' = -n- p".into(),
        in_mirabolic(&right) && nm.mul(&right, p).scale(p - 1, p) == nw,
    ));
    out
}

/// The reduction identity for `n⁺w'` with `I_{-n}` read as
/// `diag(1, ..., 1, -1)`; returned separately because it only holds in
/// characteristic 2.
pub fn literal_nplus_wprime_identity(n: usize, p: u64) -> bool {
    let k = n + 1;
    let last = n - 1;
    let nm = representative(CosetClass::NMinus, n, p);
    let nw = representative(CosetClass::NPlusWPrime, n, p);
    // -I_{-n} = diag(-1, ..., -1, 1)
    let mut right = Mat::identity(k).scale(p - 1, p);
    right.set(last, last, 1);
    right.set(last, n, p - 1);
    right.set(n, n, 1);
    nm.mul(&right, p).scale(p - 1, p) == nw
}

/// Mirabolic double-coset audit with the folding identities attached.
pub fn mirabolic_partition_audit(
    n: usize,
    p: u64,
    variant: Variant,
    budget: u128,
) -> Result<OrbitReport> {
    if variant == Variant::GxG {
        return Err(Error::Domain(
            "mirabolic audit needs PxG, GxP or PxP".into(),
        ));
    }
    let mut report = orbit_audit(n, p, variant, budget)?;
    report.identities = reduction_identities(n, p);
    Ok(report)
}

/// Checks `classify(diag(x,1) γ diag(y,1)) = classify(γ)` on random triples.
/// Returns the number of disagreements.
pub fn random_invariance_check(n: usize, p: u64, samples: usize, seed: u64) -> Result<usize> {
    check_n(n)?;
    check_prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_invertible = |size: usize| loop {
        let entries = (0..size * size).map(|_| rng.gen_range(0..p)).collect();
        let m = Mat { size, entries };
        if m.det(p) != 0 {
            return m;
        }
    };
    let mut bad = 0;
    for _ in 0..samples {
        let g = random_invertible(n + 1);
        let x = Mat::embed(&random_invertible(n));
        let y = Mat::embed(&random_invertible(n));
        if classify(&x.mul(&g, p).mul(&y, p), p)? != classify(&g, p)? {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Orders of `GL_{n+1}(Z/p^e)` and of `K_0(p^e)`, by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub gl_order: u64,
    pub k0_order: u64,
}

impl IndexReport {
    pub fn index(&self) -> u64 {
        self.gl_order / self.k0_order
    }
}

/// Enumerates `(n+1)×(n+1)` matrices over `Z/p^e`, counting the invertible
/// ones and those whose last row is `(0, ..., 0, *)`.
pub fn congruence_index(n: usize, p: u64, e: u32, budget: u128) -> Result<IndexReport> {
    check_n(n)?;
    check_prime(p)?;
    if e < 1 {
        return Err(Error::Domain("e must be at least 1".into()));
    }
    let k = n + 1;
    let m = p.pow(e);
    let needed = (m as u128).pow((k * k) as u32);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut gl = 0;
    let mut k0 = 0;
    for c in 0..needed as u64 {
        let g = Mat::from_code(c, k, m);
        if g.det(m).is_multiple_of(p) {
            continue;
        }
        gl += 1;
        if (0..n).all(|j| g.get(n, j) == 0) {
            k0 += 1;
        }
    }
    Ok(IndexReport {
        gl_order: gl,
        k0_order: k0,
    })
}

/// Result of the orbit-invariant valuation check.
#[derive(Clone, Debug, Default)]
pub struct ValuationReport {
    pub accepted: usize,
    pub skipped: usize,
    pub valuation_ok: usize,
    pub unit_ok: usize,
    pub identity_ok: usize,
    pub min_valuation: Option<u32>,
}

impl ValuationReport {
    pub fn passes(&self) -> bool {
        self.accepted > 0
            && self.valuation_ok == self.accepted
            && self.unit_ok == self.accepted
            && self.identity_ok == self.accepted
    }
}

/// Samples `γ = (a, b; c, d)` over `Z/p^{e+3}` with `c ≡ 0 mod p^e` and unit
/// determinant until `samples` are accepted, and checks `v(t) ≥ e`,
/// `v(1 - t) = 0` and `det(a)·d·t = c·adj(a)·b` for `t = c a^{-1} b d^{-1}`.
pub fn xi_t_valuation_check(
    n: usize,
    p: u64,
    e: u32,
    samples: usize,
    seed: u64,
) -> Result<ValuationReport> {
    check_n(n)?;
    check_prime(p)?;
    if e < 1 {
        return Err(Error::Domain("e must be at least 1".into()));
    }
    let k = e + 3;
    let m = p.pow(k);
    let pe = p.pow(e);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ValuationReport::default();
    let max_draws = samples.saturating_mul(100).max(100);
    let mut draws = 0;
    while rep.accepted < samples && draws < max_draws {
        draws += 1;
        let mut g = Mat::identity(n + 1);
        for i in 0..=n {
            for j in 0..=n {
                let v = if i == n && j < n {
                    pe * rng.gen_range(0..m / pe) % m
                } else {
                    rng.gen_range(0..m)
                };
                g.set(i, j, v);
            }
        }
        if g.det(m).is_multiple_of(p) {
            rep.skipped += 1;
            continue;
        }
        rep.accepted += 1;
        let Blocks { a, b, c, d } = blocks(&g);
        let det_a = a.det(m);
        let (Some(det_a_inv), Some(d_inv)) = (inv_mod(det_a, m), inv_mod(d, m)) else {
            return Err(Error::Inconsistent(
                "unit determinant without unit det(a)·d".into(),
            ));
        };
        let adj = a.adjugate(m);
        let c_adj_b = row_mat_col(&c, &adj, &b, m);
        let t = c_adj_b * det_a_inv % m * d_inv % m;
        let v = valuation(t, p, k);
        rep.min_valuation = Some(rep.min_valuation.map_or(v, |x| x.min(v)));
        if v >= e {
            rep.valuation_ok += 1;
        }
        if valuation((1 + m - t) % m, p, k) == 0 {
            rep.unit_ok += 1;
        }
        if det_a * d % m * t % m == c_adj_b {
            rep.identity_ok += 1;
        }
    }
    Ok(rep)
}

type RfMat = Vec<Vec<RF>>;

fn rf_mul(a: &RfMat, b: &RfMat) -> RfMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| RF::sum(&(0..n).map(|k| &a[i][k] * &b[k][j]).collect::<Vec<_>>()))
                .collect()
        })
        .collect()
}

fn rf_identity(k: usize) -> RfMat {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { RF::one() } else { RF::zero() })
                .collect()
        })
        .collect()
}

/// `(I, b; 0, 1)`.
fn upper_unipotent(b: &[RF]) -> RfMat {
    let n = b.len();
    let mut m = rf_identity(n + 1);
    for i in 0..n {
        m[i][n] = b[i].clone();
    }
    m
}

/// `(I, 0; c, 1)`.
fn lower_unipotent(c: &[RF]) -> RfMat {
    let n = c.len();
    let mut m = rf_identity(n + 1);
    m[n][..n].clone_from_slice(c);
    m
}

fn block_diag(a: &RfMat) -> RfMat {
    let n = a.len();
    let mut m = rf_identity(n + 1);
    for i in 0..n {
        for j in 0..n {
            m[i][j] = a[i][j].clone();
        }
    }
    m
}

/// Result of the symbolic factorization check.
#[derive(Clone, Debug)]
pub struct BruhatReport {
    /// `g k = λ · RHS` entrywise for a single scalar `λ`.
    pub proportional: bool,
    /// `λ = d = 1 + c b'`.
    pub scalar_is_d: bool,
    /// With `b' = 0` and `c' = 0` the product is `g · diag(a', 1)`.
    pub specialization_ok: bool,
}

impl BruhatReport {
    pub fn passes(&self) -> bool {
        self.proportional && self.scalar_is_d && self.specialization_ok
    }
}

/// Symbolic check of the product of two factorizations
/// `g = (I, b; 0, 1)(a, 0; 0, 1)(I, 0; c, 1)` and
/// `k = (I, b'; 0, 1)(a', 0; 0, 1)(I, 0; c', 1)`:
/// `g k ∝ (I, b + d^{-1} a b'; 0, 1)(d^{-2} a (d I - b' c) a', 0; 0, 1)(I, 0; c' + d^{-1} c a', 1)`
/// with `d = 1 + c b'`.
pub fn bruhat_product_identity_check(n: usize) -> Result<BruhatReport> {
    check_n(n)?;
    let mut reg = Registry::new();
    let mut square = |name: &str| -> RfMat {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| RF::var(reg.var(&format!("{name}{}{}", i + 1, j + 1))))
                    .collect()
            })
            .collect()
    };
    let a = square("a");
    let a2 = square("A");
    let mut vector = |name: &str| -> Vec<RF> {
        (0..n)
            .map(|i| RF::var(reg.var(&format!("{name}{}", i + 1))))
            .collect()
    };
    let b = vector("b");
    let c = vector("c");
    let b2 = vector("B");
    let c2 = vector("C");

    let build = |b: &[RF], a: &RfMat, c: &[RF]| {
        rf_mul(
            &rf_mul(&upper_unipotent(b), &block_diag(a)),
            &lower_unipotent(c),
        )
    };
    let rhs_of = |b2: &[RF], c2: &[RF]| -> Result<RfMat> {
        let d = &RF::one() + &RF::sum(&(0..n).map(|i| &c[i] * &b2[i]).collect::<Vec<_>>());
        let d_inv = d.inv()?;
        let new_b: Vec<RF> = (0..n)
            .map(|i| {
                let ab2 = RF::sum(&(0..n).map(|k| &a[i][k] * &b2[k]).collect::<Vec<_>>());
                &b[i] + &(&d_inv * &ab2)
            })
            .collect();
        // d I - b' c
        let mid: RfMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let diag = if i == j { d.clone() } else { RF::zero() };
                        &diag - &(&b2[i] * &c[j])
                    })
                    .collect()
            })
            .collect();
        let d_inv2 = &d_inv * &d_inv;
        let new_a: RfMat = rf_mul(&rf_mul(&a, &mid), &a2)
            .into_iter()
            .map(|r| r.into_iter().map(|x| &x * &d_inv2).collect())
            .collect();
        let new_c: Vec<RF> = (0..n)
            .map(|j| {
                let ca2 = RF::sum(&(0..n).map(|k| &c[k] * &a2[k][j]).collect::<Vec<_>>());
                &c2[j] + &(&d_inv * &ca2)
            })
            .collect();
        Ok(build(&new_b, &new_a, &new_c))
    };

    let g = build(&b, &a, &c);
    let k = build(&b2, &a2, &c2);
    let gk = rf_mul(&g, &k);
    let rhs = rhs_of(&b2, &c2)?;
    let lam = gk[n][n].div(&rhs[n][n])?;
    let proportional = (0..=n).all(|i| (0..=n).all(|j| gk[i][j] == &lam * &rhs[i][j]));
    let d = &RF::one() + &RF::sum(&(0..n).map(|i| &c[i] * &b2[i]).collect::<Vec<_>>());
    let scalar_is_d = lam == d;

    let zeros = vec![RF::zero(); n];
    let k0 = build(&zeros, &a2, &zeros);
    let spec_lhs = rf_mul(&g, &k0);
    let spec_rhs = rhs_of(&zeros, &zeros)?;
    let direct = rf_mul(&g, &block_diag(&a2));
    let specialization_ok = spec_lhs == direct && spec_lhs == spec_rhs;
    Ok(BruhatReport {
        proportional,
        scalar_is_d,
        specialization_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(valuation(0, 2, 4), 4);
        assert_eq!(valuation(12, 2, 5), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(permutations(3).iter().filter(|(_, e)| *e).count(), 3);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Mat::from_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]], 7);
        // 1*(1) - 2*(0 - 12) = 25 ≡ 4
        assert_eq!(m.det(7), 4);
        let inv = m.inverse(7).unwrap();
        assert_eq!(m.mul(&inv, 7), Mat::identity(3));
        assert_eq!(m.rank(7), 3);
        assert_eq!(Mat::from_rows(&[vec![1, 2], vec![2, 4]], 7).rank(7), 1);
    }

    #[test]
    fn representatives_classify_to_themselves() {
        for &(n, p) in &[(2, 2), (2, 3), (2, 5), (3, 2), (3, 3)] {
            for class in expected_classes(p) {
                assert_eq!(
                    classify(&representative(class, n, p), p).unwrap(),
                    class,
                    "n = {n}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn classify_examples() {
        let p = 5;
        assert_eq!(classify(&Mat::identity(3), p).unwrap(), CosetClass::E);
        let xi = Mat::from_rows(&[vec![1, 0, 0], vec![0, 1, 3], vec![0, 1, 1]], p);
        assert_eq!(classify(&xi, p).unwrap(), CosetClass::Xi(3));
        assert!(classify(
            &Mat::from_rows(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 1, 1]], p),
            p
        )
        .is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(pgl_order(3, 2), 168);
        assert_eq!(pgl_order(3, 3), 5616);
        assert_eq!(pgl_order(3, 5), 372000);
        assert_eq!(pgl_order(4, 2), 20160);
    }
}
