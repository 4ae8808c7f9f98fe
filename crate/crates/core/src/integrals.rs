//! Molecular integrals read from FCIDUMP files.
//!
//! Orbital indices inside the store are 0-based spatial indices. Spin
//! orbitals are interleaved: spin orbital `2p` is the alpha component of
//! spatial orbital `p` and `2p + 1` is the beta component.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::determinants::Determinant;
use crate::error::{Error, Result};

/// Largest number of spatial orbitals a [`Determinant`] bitmask can hold.
pub const MAX_SPATIAL_ORBITALS: usize = 64;

/// One- and two-electron integrals, core energy and electron counts.
///
/// The two-electron table is stored in chemist notation `(ij|kl)` with
/// 8-fold permutational symmetry folded into a packed index.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralStore {
    n_spatial: usize,
    n_alpha: usize,
    n_beta: usize,
    e_core: f64,
    h: Vec<f64>,
    g: Vec<f64>,
    orbsym: Vec<i64>,
    isym: Option<i64>,
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    if i >= j {
        i * (i + 1) / 2 + j
    } else {
        j * (j + 1) / 2 + i
    }
}

impl IntegralStore {
    /// Creates a store with every integral set to zero.
    pub fn zeros(n_spatial: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        if n_spatial == 0 || n_spatial > MAX_SPATIAL_ORBITALS {
            return Err(Error::Inconsistent(format!(
                "number of spatial orbitals {n_spatial} must lie in [1, {MAX_SPATIAL_ORBITALS}]"
            )));
        }
        if n_alpha + n_beta == 0 {
            return Err(Error::Inconsistent("no electrons".into()));
        }
        if n_alpha > n_spatial || n_beta > n_spatial {
            return Err(Error::Inconsistent(format!(
                "{n_alpha} alpha / {n_beta} beta electrons do not fit in {n_spatial} orbitals"
            )));
        }
        let npair = n_spatial * (n_spatial + 1) / 2;
        Ok(Self {
            n_spatial,
            n_alpha,
            n_beta,
            e_core: 0.0,
            h: vec![0.0; n_spatial * n_spatial],
            g: vec![0.0; npair * (npair + 1) / 2],
            orbsym: Vec::new(),
            isym: None,
        })
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_spatial
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_beta(&self) -> usize {
        self.n_beta
    }

    pub fn n_electrons(&self) -> usize {
        self.n_alpha + self.n_beta
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    /// `ORBSYM` labels from the header, kept for reference only.
    pub fn orbsym(&self) -> &[i64] {
        &self.orbsym
    }

    pub fn isym(&self) -> Option<i64> {
        self.isym
    }

    /// One-electron integral `h_pq` over spatial orbitals.
    #[inline]
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[p * self.n_spatial + q]
    }

    /// Two-electron integral `(ij|kl)` over spatial orbitals, chemist notation.
    #[inline]
    pub fn g(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.g[pair_index(pair_index(i, j), pair_index(k, l))]
    }

    pub fn set_e_core(&mut self, value: f64) {
        self.e_core = value;
    }

    /// Sets `h_pq` and `h_qp`.
    pub fn set_h(&mut self, p: usize, q: usize, value: f64) {
        self.h[p * self.n_spatial + q] = value;
        self.h[q * self.n_spatial + p] = value;
    }

    /// Sets `(ij|kl)` and its seven symmetry partners.
    pub fn set_g(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        let idx = pair_index(pair_index(i, j), pair_index(k, l));
        self.g[idx] = value;
    }

    /// Aufbau reference: the lowest `n_alpha` / `n_beta` spatial orbitals filled.
    pub fn hf_determinant(&self) -> Determinant {
        Determinant::new(low_bits(self.n_alpha), low_bits(self.n_beta))
    }

    /// Whether spin orbital `so` is occupied in the aufbau reference.
    pub fn is_reference_occupied(&self, so: usize) -> bool {
        let p = so / 2;
        if so.is_multiple_of(2) {
            p < self.n_alpha
        } else {
            p < self.n_beta
        }
    }

    /// Fock-matrix diagonal for every spin orbital, built from the aufbau
    /// reference occupation.
    pub fn fock_diagonal(&self) -> Vec<f64> {
        let n_so = self.n_spin_orbitals();
        let occupied: Vec<usize> = (0..n_so)
            .filter(|&so| self.is_reference_occupied(so))
            .collect();
        (0..n_so)
            .map(|p| {
                let sp = p / 2;
                let mut e = self.h(sp, sp);
                for &i in &occupied {
                    let si = i / 2;
                    e += self.g(sp, sp, si, si);
                    if p % 2 == i % 2 {
                        e -= self.g(sp, si, si, sp);
                    }
                }
                e
            })
            .collect()
    }

    /// Serializes the store as FCIDUMP text. Only symmetry-unique nonzero
    /// integrals are written; values use shortest round-trip formatting.
    pub fn to_fcidump(&self) -> String {
        let n = self.n_spatial;
        let mut out = String::new();
        let ms2 = self.n_alpha as i64 - self.n_beta as i64;
        let _ = writeln!(
            out,
            " &FCI NORB={},NELEC={},MS2={},",
            n,
            self.n_electrons(),
            ms2
        );
        if !self.orbsym.is_empty() {
            let syms: Vec<String> = self.orbsym.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "  ORBSYM={},", syms.join(","));
        }
        if let Some(isym) = self.isym {
            let _ = writeln!(out, "  ISYM={isym},");
        }
        out.push_str(" &END\n");
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    for l in 0..=k {
                        if pair_index(i, j) < pair_index(k, l) {
                            continue;
                        }
                        let v = self.g(i, j, k, l);
                        if v != 0.0 {
                            let _ = writeln!(out, "{v:?} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let v = self.h(i, j);
                if v != 0.0 {
                    let _ = writeln!(out, "{v:?} {} {} 0 0", i + 1, j + 1);
                }
            }
        }
        let _ = writeln!(out, "{:?} 0 0 0 0", self.e_core);
        out
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Parses FCIDUMP text.
///
/// The namelist header (`&FCI ... &END` or `... /`) must provide `NORB`,
/// `NELEC` and `MS2`. Body lines are `value i j k l` with 1-based indices:
/// `i j k l` two-electron, `i j 0 0` one-electron, `0 0 0 0` core energy.
/// Lines of the form `value i 0 0 0` (orbital energies) are accepted and
/// ignored.
pub fn parse_fcidump(text: &str) -> Result<IntegralStore> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    // Header.
    let mut header = String::new();
    let mut header_start = None;
    let mut header_end = None;
    for (lineno, line) in lines.by_ref() {
        let trimmed = line.trim();
        if header_start.is_none() {
            if trimmed.is_empty() {
                continue;
            }
            if !trimmed.to_ascii_uppercase().starts_with("&FCI") {
                return Err(Error::Parse {
                    line: lineno,
                    message: "expected namelist header starting with &FCI".into(),
                });
            }
            header_start = Some(lineno);
        }
        let upper = trimmed.to_ascii_uppercase();
        if let Some(pos) = find_terminator(&upper) {
            header.push_str(&upper[..pos]);
            header.push(' ');
            header_end = Some(lineno);
            break;
        }
        header.push_str(&upper);
        header.push(' ');
    }
    let header_start = header_start.ok_or_else(|| Error::Parse {
        line: 1,
        message: "empty input, expected &FCI header".into(),
    })?;
    let header_end = header_end.ok_or_else(|| Error::Parse {
        line: header_start,
        message: "namelist header is not terminated by &END or /".into(),
    })?;

    let fields = parse_namelist(&header["&FCI".len()..], header_start)?;
    let scalar = |key: &str| -> Result<i64> {
        let values = fields.get(key).ok_or_else(|| Error::Parse {
            line: header_start,
            message: format!("header is missing {key}"),
        })?;
        match values.as_slice() {
            [v] => Ok(*v),
            _ => Err(Error::Parse {
                line: header_start,
                message: format!("{key} must have exactly one value"),
            }),
        }
    };
    let norb = scalar("NORB")?;
    let nelec = scalar("NELEC")?;
    let ms2 = fields.get("MS2").map_or(Ok(0), |_| scalar("MS2"))?;
    if norb <= 0 || nelec <= 0 {
        return Err(Error::Parse {
            line: header_start,
            message: format!("NORB={norb} and NELEC={nelec} must be positive"),
        });
    }
    if (nelec + ms2) % 2 != 0 {
        return Err(Error::Inconsistent(format!(
            "NELEC={nelec} and MS2={ms2} give a half-integer electron count"
        )));
    }
    if ms2.abs() > nelec {
        return Err(Error::Inconsistent(format!(
            "|MS2|={} exceeds NELEC={nelec}",
            ms2.abs()
        )));
    }
    let n_alpha = ((nelec + ms2) / 2) as usize;
    let n_beta = ((nelec - ms2) / 2) as usize;
    let norb = norb as usize;
    let mut store = IntegralStore::zeros(norb, n_alpha, n_beta)?;
    if let Some(orbsym) = fields.get("ORBSYM") {
        store.orbsym = orbsym.clone();
    }
    if fields.contains_key("ISYM") {
        store.isym = Some(scalar("ISYM")?);
    }
    debug_assert!(header_end >= header_start);

    // Body.
    for (lineno, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let value = parts
            .next()
            .map(parse_real)
            .transpose()
            .map_err(|message| Error::Parse {
                line: lineno,
                message,
            })?;
        let value = value.expect("non-empty line has a first token");
        let mut idx = [0i64; 4];
        for slot in &mut idx {
            let tok = parts.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: "expected a value followed by four indices".into(),
            })?;
            *slot = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid orbital index {tok:?}"),
            })?;
        }
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                message: "trailing tokens after four indices".into(),
            });
        }
        for &i in &idx {
            if i < 0 || i as usize > norb {
                return Err(Error::IndexOutOfRange {
                    line: lineno,
                    index: i,
                    norb,
                });
            }
        }
        let [i, j, k, l] = idx.map(|x| x as usize);
        match (i, j, k, l) {
            (0, 0, 0, 0) => store.e_core = value,
            (i, j, 0, 0) if i > 0 && j > 0 => store.set_h(i - 1, j - 1, value),
            (i, 0, 0, 0) if i > 0 => {}
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                store.set_g(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unsupported index pattern {i} {j} {k} {l}"),
                })
            }
        }
    }
    Ok(store)
}

fn find_terminator(upper: &str) -> Option<usize> {
    if let Some(pos) = upper.find("&END") {
        return Some(pos);
    }
    if let Some(pos) = upper.find("$END") {
        return Some(pos);
    }
    upper.find('/')
}

fn parse_namelist(body: &str, line: usize) -> Result<BTreeMap<String, Vec<i64>>> {
    let mut fields: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    let mut current: Option<String> = None;
    let normalized = body.replace(',', " ");
    for token in normalized.split_whitespace() {
        let value_part = if let Some((key, rest)) = token.split_once('=') {
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: format!("malformed header entry {token:?}"),
                });
            }
            fields.insert(key.clone(), Vec::new());
            current = Some(key);
            rest
        } else {
            token
        };
        if value_part.is_empty() {
            continue;
        }
        let key = current.as_ref().ok_or_else(|| Error::Parse {
            line,
            message: format!("value {value_part:?} outside any KEY=VALUE entry"),
        })?;
        let value: i64 = value_part.parse().map_err(|_| Error::Parse {
            line,
            message: format!("non-integer value {value_part:?} for {key}"),
        })?;
        fields.get_mut(key).expect("key inserted above").push(value);
    }
    Ok(fields)
}

fn parse_real(token: &str) -> std::result::Result<f64, String> {
    let normalized: String = token
        .chars()
        .map(|c| if c == 'D' || c == 'd' { 'e' } else { c })
        .collect();
    normalized
        .parse::<f64>()
        .map_err(|_| format!("invalid integral value {token:?}"))
}
