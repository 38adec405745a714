//! Arithmetic in `F_{p^e}` with a distinguished subfield `F_q`, `q = p^s`, `e = s·n`.
//!
//! Elements are stored as discrete logarithms to the base of the root `η` of the
//! defining modulus. Multiplication is exponent addition; addition goes through a
//! Zech logarithm table (`log(1 + η^k)`). The subfield `F_q` is the fixed field of
//! `x ↦ x^q`, i.e. `{0} ∪ {η^{m·(Q-1)/(q-1)}}`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field (number of elements) built by default.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 24;

/// Largest subfield for which `F_q` lookup tables are built (coordinates are `u8`).
pub const MAX_SUBFIELD_ORDER: u64 = 256;

/// A field element: zero, or `η^k` with `k` reduced modulo `Q - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(u32::MAX);
    pub const ONE: Elem = Elem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == u32::MAX
    }

    /// Discrete logarithm to the base `η`, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }

    /// Dense index: 0 for zero, `k + 1` for `η^k`.
    #[inline]
    pub fn index(self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.0 as usize + 1
        }
    }

    /// JSON form: the exponent, or -1 for zero.
    pub fn to_exponent(self) -> i64 {
        match self.log() {
            Some(k) => k as i64,
            None => -1,
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(k) => write!(f, "η^{k}"),
        }
    }
}

impl Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_exponent())
    }
}

/// Defining data of a field `F_{p^{s·n}}` with its designated subfield `F_{p^s}`.
///
/// `modulus` lists the coefficients of a monic polynomial of degree `s·n` over
/// `F_p`, highest degree first (`x^4 + x + 1` is `[1, 0, 0, 1, 1]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub s: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, s: u32, n: u32, modulus: Vec<u32>) -> Self {
        FieldSpec { p, s, n, modulus }
    }

    pub fn degree(&self) -> u32 {
        self.s * self.n
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.s)
    }

    /// Modulus coefficients as written (highest degree first), reduced into `[0, p)`.
    /// Signed input such as `x^4 - x^3 - 1` is accepted through [`FieldSpec::from_signed`].
    pub fn from_signed(p: u32, s: u32, n: u32, coeffs_high_first: &[i64]) -> Self {
        let modulus = coeffs_high_first
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u32)
            .collect();
        FieldSpec { p, s, n, modulus }
    }

    fn modulus_text(&self) -> String {
        if self.p <= 10 {
            self.modulus.iter().map(|d| d.to_string()).collect()
        } else {
            self.modulus
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} s={} n={} mod={}",
            self.p,
            self.s,
            self.n,
            self.modulus_text()
        )
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Parses `"p=2 s=1 n=4 mod=10011"`. Modulus digits are highest degree first;
    /// for `p > 10` they must be comma separated.
    fn from_str(text: &str) -> Result<Self> {
        let mut p = None;
        let mut s = None;
        let mut n = None;
        let mut modulus = None;
        for token in text.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::BadSpec(format!("expected key=value, got {token:?}")))?;
            let int = |v: &str| {
                v.parse::<u32>()
                    .map_err(|_| Error::BadSpec(format!("{key}: not an integer: {v:?}")))
            };
            match key {
                "p" => p = Some(int(value)?),
                "s" => s = Some(int(value)?),
                "n" => n = Some(int(value)?),
                "mod" | "modulus" => {
                    let digits: Result<Vec<u32>> = if value.contains(',') {
                        value.split(',').map(int).collect()
                    } else {
                        value
                            .chars()
                            .map(|c| {
                                c.to_digit(10)
                                    .ok_or_else(|| Error::BadSpec(format!("mod: bad digit {c:?}")))
                            })
                            .collect()
                    };
                    modulus = Some(digits?);
                }
                other => return Err(Error::BadSpec(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| Error::BadSpec(format!("missing {k}"));
        Ok(FieldSpec {
            p: p.ok_or_else(|| missing("p"))?,
            s: s.unwrap_or(1),
            n: n.ok_or_else(|| missing("n"))?,
            modulus: modulus.ok_or_else(|| missing("mod"))?,
        })
    }
}

/// Lookup-table arithmetic on `F_q`, elements addressed by a `u8` index:
/// 0 is zero, `m + 1` is `η^{m·(Q-1)/(q-1)}`. Index 1 is the identity.
#[derive(Clone, Debug)]
pub struct Subfield {
    q: usize,
    elems: Vec<Elem>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Subfield {
    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn elem(&self, i: u8) -> Elem {
        self.elems[i as usize]
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// `a += c · b` coordinate-wise.
    #[inline]
    pub fn axpy(&self, a: &mut [u8], c: u8, b: &[u8]) {
        if c == 0 {
            return;
        }
        let row = &self.mul[c as usize * self.q..(c as usize + 1) * self.q];
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.add[*x as usize * self.q + row[y as usize] as usize];
        }
    }

    #[inline]
    pub fn scale(&self, a: &mut [u8], c: u8) {
        let row = &self.mul[c as usize * self.q..(c as usize + 1) * self.q];
        for x in a.iter_mut() {
            *x = row[*x as usize];
        }
    }

    #[inline]
    pub fn dot(&self, a: &[u8], b: &[u8]) -> u8 {
        let mut acc = 0u8;
        for (&x, &y) in a.iter().zip(b) {
            acc = self.add(acc, self.mul(x, y));
        }
        acc
    }
}

/// The field `F_{p^e}` together with its subfield `F_q`.
///
/// Immutable after construction; share it behind an `Arc`.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    p: u32,
    e: u32,
    q: u32,
    order: u32,
    group: u32,
    fq_step: u32,
    /// `exp[k]` is the base-`p` code of the polynomial representation of `η^k`.
    exp: Vec<u32>,
    /// Inverse of `exp`; `u32::MAX` at code 0.
    log: Vec<u32>,
    /// `zech[k] = log(1 + η^k)`, `u32::MAX` when `1 + η^k = 0`.
    zech: Vec<u32>,
    /// `q^i mod (Q-1)` for `i < n`.
    frob_mult: Vec<u64>,
    sub: Subfield,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("spec", &self.spec)
            .field("Q", &self.order)
            .field("q", &self.q)
            .finish()
    }
}

impl Field {
    pub fn build(spec: FieldSpec) -> Result<Field> {
        Field::build_with_budget(spec, DEFAULT_FIELD_BUDGET)
    }

    pub fn build_with_budget(spec: FieldSpec, budget: u64) -> Result<Field> {
        let FieldSpec { p, s, n, .. } = spec;
        if p < 2 || !is_prime(p as u64) {
            return Err(Error::BadSpec(format!("p={p} is not prime")));
        }
        if s == 0 || n == 0 {
            return Err(Error::BadSpec("s and n must be positive".into()));
        }
        let e = s * n;
        let order = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if order > budget as u128 || order > u32::MAX as u128 / 2 {
            return Err(Error::BudgetExceeded {
                needed: order,
                allowed: budget as u128,
            });
        }
        let q = (p as u64).pow(s);
        if n > 1 && q > MAX_SUBFIELD_ORDER {
            return Err(Error::BadSpec(format!(
                "subfield order q={q} exceeds {MAX_SUBFIELD_ORDER}"
            )));
        }
        if spec.modulus.len() != e as usize + 1 {
            return Err(Error::BadSpec(format!(
                "modulus must have degree {e} ({} coefficients), got {}",
                e + 1,
                spec.modulus.len()
            )));
        }
        if spec.modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadSpec(
                "modulus coefficients must lie in [0, p)".into(),
            ));
        }
        if spec.modulus[0] != 1 {
            return Err(Error::BadSpec("modulus must be monic".into()));
        }
        // low-degree-first copy
        let modulus: Vec<u32> = spec.modulus.iter().rev().copied().collect();
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }

        let order = order as u32;
        let group = order - 1;
        let exp = power_table(&modulus, p, group);
        let one_code = 1u32;
        for r in prime_factors(group as u64) {
            if exp[(group as u64 / r) as usize] == one_code {
                let actual = divisors(group as u64)
                    .into_iter()
                    .find(|&d| d < group as u64 && exp[d as usize] == one_code)
                    .unwrap_or(group as u64);
                return Err(Error::NotPrimitiveRoot {
                    order: actual,
                    expected: group as u64,
                });
            }
        }
        let mut log = vec![u32::MAX; order as usize];
        for (k, &code) in exp.iter().enumerate() {
            log[code as usize] = k as u32;
        }
        let zech = exp
            .iter()
            .map(|&code| {
                let d0 = code % p;
                let plus_one = code - d0 + (d0 + 1) % p;
                log[plus_one as usize]
            })
            .collect();
        let q32 = q as u32;
        let fq_step = group / (q32 - 1).max(1);
        let frob_mult = (0..n).map(|i| mod_pow(q, i as u64, group as u64)).collect();

        let mut field = Field {
            spec,
            p,
            e,
            q: q32,
            order,
            group,
            fq_step,
            exp,
            log,
            zech,
            frob_mult,
            sub: Subfield {
                q: 0,
                elems: vec![],
                add: vec![],
                mul: vec![],
                neg: vec![],
                inv: vec![],
            },
        };
        if q <= MAX_SUBFIELD_ORDER {
            field.sub = field.build_subfield();
        }
        Ok(field)
    }

    fn build_subfield(&self) -> Subfield {
        let q = self.q as usize;
        let mut elems = vec![Elem::ZERO];
        elems.extend((0..q as u32 - 1).map(|m| Elem(m * self.fq_step)));
        let idx = |x: Elem| -> u8 {
            match x.log() {
                None => 0,
                Some(k) => (k / self.fq_step + 1) as u8,
            }
        };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = idx(self.add(elems[a], elems[b]));
                mul[a * q + b] = idx(self.mul(elems[a], elems[b]));
            }
        }
        let neg = elems.iter().map(|&x| idx(self.neg(x))).collect();
        let inv = elems
            .iter()
            .map(|&x| {
                if x.is_zero() {
                    0
                } else {
                    idx(self.inv(x).unwrap())
                }
            })
            .collect();
        Subfield {
            q,
            elems,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    /// Degree of the field over its prime field.
    pub fn degree(&self) -> u32 {
        self.e
    }
    /// Extension degree over `F_q`.
    pub fn n(&self) -> u32 {
        self.spec.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Number of field elements `Q = q^n`.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// `Q - 1`.
    pub fn group_order(&self) -> u32 {
        self.group
    }
    /// `(Q-1)/(q-1)`: `η^{fq_step}` generates `F_q^*`.
    pub fn fq_step(&self) -> u32 {
        self.fq_step
    }
    pub fn subfield(&self) -> &Subfield {
        &self.sub
    }

    /// `η^k`.
    #[inline]
    pub fn eta_pow(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.group as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let k = if b.0 >= a.0 {
            b.0 - a.0
        } else {
            b.0 + self.group - a.0
        };
        let z = self.zech[k as usize];
        if z == u32::MAX {
            Elem::ZERO
        } else {
            self.reduce(a.0 as u64 + z as u64)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a.is_zero() || self.p == 2 {
            a
        } else {
            self.reduce(a.0 as u64 + (self.group / 2) as u64)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            Elem::ZERO
        } else {
            self.reduce(a.0 as u64 + b.0 as u64)
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        match a.log() {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(Elem::ONE),
            Some(k) => Ok(Elem(self.group - k)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for a non-negative exponent; `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        match a.log() {
            None => {
                if e == 0 {
                    Elem::ONE
                } else {
                    Elem::ZERO
                }
            }
            Some(k) => {
                let g = self.group as u64;
                Elem(((k as u64 * (e % g)) % g) as u32)
            }
        }
    }

    /// `a^e` for a signed exponent; negative powers of zero are an error.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// `x ↦ x^q`.
    #[inline]
    pub fn frob(&self, a: Elem) -> Elem {
        self.frob_pow(a, 1)
    }

    /// `x ↦ x^{q^i}`, `i` taken modulo `n`.
    #[inline]
    pub fn frob_pow(&self, a: Elem, i: usize) -> Elem {
        match a.log() {
            None => a,
            Some(k) => {
                let m = self.frob_mult[i % self.frob_mult.len()];
                Elem(((k as u64 * m) % self.group as u64) as u32)
            }
        }
    }

    /// Relative trace `Tr(x) = x + x^q + … + x^{q^{n-1}}`.
    pub fn trace(&self, a: Elem) -> Elem {
        (0..self.spec.n as usize).fold(Elem::ZERO, |acc, i| self.add(acc, self.frob_pow(a, i)))
    }

    /// Relative norm `x^{1 + q + … + q^{n-1}}`.
    pub fn norm(&self, a: Elem) -> Elem {
        (0..self.spec.n as usize).fold(Elem::ONE, |acc, i| self.mul(acc, self.frob_pow(a, i)))
    }

    #[inline]
    pub fn in_subfield(&self, a: Elem) -> bool {
        match a.log() {
            None => true,
            Some(k) => k % self.fq_step == 0,
        }
    }

    /// True when `a` lies in `F_{q^d}` (for `d | n`).
    pub fn in_intermediate(&self, a: Elem, d: usize) -> bool {
        self.frob_pow(a, d) == a
    }

    /// The `q` elements of `F_q`, zero first, then `1, η^{step}, η^{2·step}, …`.
    pub fn fq_elements(&self) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO];
        out.extend((0..self.q - 1).map(|m| Elem(m * self.fq_step)));
        out
    }

    /// All `Q` elements, zero first, then `η^0, η^1, …`.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        std::iter::once(Elem::ZERO).chain(self.nonzero_elements())
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.group).map(Elem)
    }

    /// The image of the integer `m` in the prime field.
    pub fn from_int(&self, m: i64) -> Elem {
        let code = m.rem_euclid(self.p as i64) as u32;
        self.from_code(code)
    }

    /// Coefficients (low degree first) of the polynomial representation.
    pub fn to_poly(&self, a: Elem) -> Vec<u32> {
        let mut code = self.code(a);
        (0..self.e)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    /// Element with the given polynomial representation (low degree first).
    pub fn from_poly(&self, coeffs: &[u32]) -> Elem {
        let mut code = 0u32;
        for &c in coeffs.iter().take(self.e as usize).rev() {
            code = code * self.p + c % self.p;
        }
        self.from_code(code)
    }

    fn code(&self, a: Elem) -> u32 {
        match a.log() {
            None => 0,
            Some(k) => self.exp[k as usize],
        }
    }

    fn from_code(&self, code: u32) -> Elem {
        if code == 0 {
            Elem::ZERO
        } else {
            Elem(self.log[code as usize])
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let k = rng.gen_range(0..self.order);
        if k == self.group {
            Elem::ZERO
        } else {
            Elem(k)
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.group))
    }

    pub fn random_fq_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.q - 1) * self.fq_step)
    }

    #[inline]
    fn reduce(&self, k: u64) -> Elem {
        let g = self.group as u64;
        Elem(if k >= g { (k - g) as u32 } else { k as u32 })
    }
}

/// `exp[k]` = base-`p` code of `x^k mod m` for `k < count`.
fn power_table(modulus_low_first: &[u32], p: u32, count: u32) -> Vec<u32> {
    let e = modulus_low_first.len() - 1;
    let mut cur = vec![0u32; e];
    cur[0] = 1;
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let mut code = 0u32;
        for &c in cur.iter().rev() {
            code = code * p + c;
        }
        out.push(code);
        // multiply by x and reduce by the monic modulus
        let lead = cur[e - 1];
        for i in (1..e).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if lead != 0 {
            for i in 0..e {
                let sub = (lead as u64 * modulus_low_first[i] as u64 % p as u64) as u32;
                cur[i] = (cur[i] + p - sub) % p;
            }
        }
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n)
        .take_while(|d| d * d <= n)
        .filter(|d| n % d == 0)
        .collect();
    let big: Vec<u64> = out
        .iter()
        .rev()
        .map(|d| n / d)
        .filter(|&d| d * d != n)
        .collect();
    out.extend(big);
    out
}

fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Dense polynomials over `F_p`, low degree first, used only for the
/// irreducibility test of the modulus.
mod fp_poly {
    fn trim(a: &mut Vec<u32>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        super::mod_pow(a as u64, p as u64 - 2, p as u64) as u32
    }

    fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let sub = (c as u64 * mi as u64 % p as u64) as u32;
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        if r.is_empty() {
            r.push(0);
        }
        r
    }

    fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        rem(&out, m, p)
    }

    fn pow_mod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !(b.len() == 1 && b[0] == 0) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `x^{p^k} mod m`.
    fn x_pow_p_pow(k: u32, m: &[u32], p: u32) -> Vec<u32> {
        let mut h = rem(&[0, 1], m, p);
        for _ in 0..k {
            h = pow_mod(&h, p as u64, m, p);
        }
        h
    }

    fn minus_x(h: &[u32], p: u32) -> Vec<u32> {
        let mut out = h.to_vec();
        if out.len() < 2 {
            out.resize(2, 0);
        }
        out[1] = (out[1] + p - 1) % p;
        trim(&mut out);
        out
    }

    /// Rabin's test for a monic polynomial `m` (low degree first).
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let e = (m.len() - 1) as u32;
        if e == 0 {
            return false;
        }
        if e == 1 {
            return true;
        }
        for r in super::prime_factors(e as u64) {
            let h = minus_x(&x_pow_p_pow(e / r as u32, m, p), p);
            let g = gcd(m, &h, p);
            if g.len() > 1 {
                return false;
            }
        }
        let h = minus_x(&x_pow_p_pow(e, m, p), p);
        h.len() == 1 && h[0] == 0
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn rabin_small_cases() {
            // x^2 + 1 over F_3 is irreducible, over F_5 it is not
            assert!(is_irreducible(&[1, 0, 1], 3));
            assert!(!is_irreducible(&[1, 0, 1], 5));
            // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
            assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
            assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
            // (x^2 + x + 1)(x^3 + x + 1) has no roots but is reducible
            assert!(!is_irreducible(&[1, 0, 0, 0, 1, 1], 2));
        }
    }
}

/// Lexicographically first primitive monic polynomial of degree `e` over `F_p`
/// (coefficients highest degree first), or `None` if the search budget is hit.
pub fn first_primitive_polynomial(p: u32, e: u32) -> Option<Vec<u32>> {
    let count = (p as u64).checked_pow(e)?;
    if count > DEFAULT_FIELD_BUDGET {
        return None;
    }
    for tail in 1..count {
        let mut coeffs = vec![0u32; e as usize];
        let mut t = tail;
        for c in coeffs.iter_mut().rev() {
            *c = (t % p as u64) as u32;
            t /= p as u64;
        }
        let mut modulus = vec![1u32];
        modulus.extend(coeffs);
        let spec = FieldSpec::new(p, 1, e, modulus.clone());
        if Field::build(spec).is_ok() {
            return Some(modulus);
        }
    }
    None
}

/// Moduli used by default for `F_{p^e}`, highest degree first.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 3, &[1, 0, 1, 1]),
    (2, 4, &[1, 0, 0, 1, 1]),
    (3, 4, &[1, 2, 0, 0, 2]),
    (2, 8, &[1, 0, 0, 0, 1, 1, 1, 0, 1]),
    (5, 4, &[1, 0, 4, 4, 2]),
];

/// Writes `q = p^s` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut s) = (q, 0);
    while r % p == 0 {
        r /= p;
        s += 1;
    }
    (r == 1).then_some((p, s))
}

/// Field specification for `F_{q^n}` with the default modulus: an embedded
/// table for the common fields, otherwise the lexicographically first
/// primitive polynomial.
pub fn default_spec(q: u32, n: u32) -> Result<FieldSpec> {
    let (p, s) =
        prime_power(q).ok_or_else(|| Error::BadSpec(format!("q={q} is not a prime power")))?;
    if n == 0 {
        return Err(Error::BadSpec("n must be positive".into()));
    }
    let e = s * n;
    let modulus = match DEFAULT_MODULI.iter().find(|m| m.0 == p && m.1 == e) {
        Some(m) => m.2.to_vec(),
        None => first_primitive_polynomial(p, e)
            .ok_or_else(|| Error::BadSpec(format!("no default modulus for F_{{{p}^{e}}}")))?,
    };
    Ok(FieldSpec::new(p, s, n, modulus))
}
