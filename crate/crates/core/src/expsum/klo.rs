//! K(b) = sum_t c(t) z^Tr(bt), with c(t) = #{x unit : x + 1/x = t}, for
//! every b in F_Q at once.
//!
//! Writing t = sum t_j x^j, Tr(bt) = sum_j t_j Tr(b x^j), so K(b) is the
//! transform C^(chi) = sum_t c(t) z^<chi,t> over (Z/p)^K evaluated at
//! chi_j = Tr(b x^j). The transform runs one base-p digit at a time on
//! length-p coordinate vectors, where multiplying by z^r is a rotation; all
//! coordinates stay non-negative and sum to Q - 1, so u32 storage suffices.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::cyclo::CycInt;
use crate::ff::ExtensionField;
use crate::{Budget, Error, Result};

const MAGIC: &[u8; 4] = b"KLTB";

#[derive(Debug)]
pub struct KloTable {
    p: u32,
    a: u32,
    k: u32,
    /// K(g^e) for e = 0..Q-1, p - 1 canonical coordinates each.
    klog: Vec<i32>,
}

impl KloTable {
    pub fn build(ext: &ExtensionField, budget: &Budget) -> Result<Self> {
        let tables = ext.tables();
        let p = ext.big().p() as usize;
        let q = ext.big().order() as usize;
        budget.check_table("Kloosterman table", q as u128)?;
        if q >= i32::MAX as usize {
            return Err(Error::FieldTooLarge {
                p: p as u32,
                k: ext.big().degree(),
            });
        }
        let q1 = q - 1;
        let exp = tables.exp();

        // c(t): t = (x^2 + 1) / x, so log t = log(x^2 + 1) - log x.
        let mut buf = vec![0u32; q * p];
        for e in 0..q1 {
            let sq = exp[(2 * e) % q1] as u64;
            let s = tables.add_one_index(sq);
            let t = match tables.log_index(s) {
                None => 0,
                Some(ls) => exp[(ls as usize + q1 - e) % q1] as usize,
            };
            buf[t * p] += 1;
        }

        let mut stride = 1usize;
        let mut group = vec![0u32; p * p];
        while stride < q {
            let block = stride * p;
            for start in (0..q).step_by(block) {
                for off in 0..stride {
                    let base = start + off;
                    for v in 0..p {
                        let at = (base + v * stride) * p;
                        group[v * p..(v + 1) * p].copy_from_slice(&buf[at..at + p]);
                    }
                    for s in 0..p {
                        let at = (base + s * stride) * p;
                        let out = &mut buf[at..at + p];
                        out.fill(0);
                        for v in 0..p {
                            let r = s * v % p;
                            let src = &group[v * p..(v + 1) * p];
                            for (t, &c) in src.iter().enumerate() {
                                out[(t + r) % p] += c;
                            }
                        }
                    }
                }
            }
            stride = block;
        }

        let trexp = tables.trexp();
        let basis = tables.basis_logs();
        let mut klog = vec![0i32; q1 * (p - 1)];
        for e in 0..q1 {
            let mut chi = 0usize;
            for &l in basis.iter().rev() {
                chi = chi * p + trexp[tables.add_exp(e, l as usize)] as usize;
            }
            let full = &buf[chi * p..(chi + 1) * p];
            let top = full[p - 1] as i64;
            for (dst, &c) in klog[e * (p - 1)..(e + 1) * (p - 1)].iter_mut().zip(full) {
                *dst = (c as i64 - top) as i32;
            }
        }
        Ok(KloTable {
            p: p as u32,
            a: ext.base().degree(),
            k: ext.k(),
            klog,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Q - 1.
    pub fn units(&self) -> usize {
        self.klog.len() / (self.p as usize - 1)
    }

    /// Coordinates of K(g^e).
    #[inline]
    pub fn by_log(&self, e: usize) -> &[i32] {
        let w = self.p as usize - 1;
        &self.klog[e * w..(e + 1) * w]
    }

    /// K(b) for the element with canonical index b.
    pub fn value(&self, ext: &ExtensionField, b: u64) -> CycInt {
        match ext.tables().log_index(b) {
            None => CycInt::from_int(self.p, self.units() as i64),
            Some(e) => CycInt::from_coords(
                self.p,
                self.by_log(e as usize).iter().map(|&c| BigInt::from(c)).collect(),
            ),
        }
    }

    pub fn file_name(p: u32, a: u32, k: u32) -> String {
        format!("klo_p{p}_a{a}_k{k}.tbl")
    }

    pub fn path_in(dir: &Path, p: u32, a: u32, k: u32) -> PathBuf {
        dir.join(Self::file_name(p, a, k))
    }

    /// Writes records in canonical index order, K(0) first.
    pub fn save(&self, ext: &ExtensionField, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = Self::path_in(dir, self.p, self.a, self.k);
        let tmp = path.with_extension("tmp");
        let mut w = BufWriter::new(File::create(&tmp)?);
        w.write_all(MAGIC)?;
        for x in [self.p, self.a, self.k, 4] {
            w.write_all(&x.to_le_bytes())?;
        }
        let w_len = self.p as usize - 1;
        let q = self.units() + 1;
        let zero_rec: Vec<i32> = std::iter::once(self.units() as i32)
            .chain(std::iter::repeat_n(0, w_len - 1))
            .collect();
        for b in 0..q as u64 {
            let rec = match ext.tables().log_index(b) {
                None => &zero_rec[..],
                Some(e) => self.by_log(e as usize),
            };
            for c in rec {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        w.flush()?;
        drop(w);
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Reads a cached table; Ok(None) when the file does not exist.
    pub fn load(ext: &ExtensionField, dir: &Path) -> Result<Option<Self>> {
        let p = ext.big().p();
        let a = ext.base().degree();
        let k = ext.k();
        let path = Self::path_in(dir, p, a, k);
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let q = ext.big().order() as usize;
        let w_len = p as usize - 1;
        let expected = 20 + (q * w_len * 4) as u64;
        if file.metadata()?.len() != expected {
            return Err(Error::Cache(format!("{}: unexpected size", path.display())));
        }
        let mut r = BufReader::new(file);
        let mut head = [0u8; 20];
        r.read_exact(&mut head)?;
        let word = |i: usize| u32::from_le_bytes(head[4 + 4 * i..8 + 4 * i].try_into().unwrap());
        if &head[..4] != MAGIC || [word(0), word(1), word(2), word(3)] != [p, a, k, 4] {
            return Err(Error::Cache(format!("{}: header mismatch", path.display())));
        }
        let mut bytes = vec![0u8; q * w_len * 4];
        r.read_exact(&mut bytes)?;
        let by_index: Vec<i32> = bytes
            .chunks_exact(4)
            .map(|c| i32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        drop(bytes);
        let exp = ext.tables().exp();
        let mut klog = vec![0i32; (q - 1) * w_len];
        for (e, &b) in exp.iter().enumerate() {
            let b = b as usize;
            klog[e * w_len..(e + 1) * w_len].copy_from_slice(&by_index[b * w_len..(b + 1) * w_len]);
        }
        Ok(Some(KloTable { p, a, k, klog }))
    }

    /// Loads from `dir` when present, otherwise builds and stores there.
    pub fn cached(ext: &ExtensionField, dir: Option<&Path>, budget: &Budget) -> Result<Self> {
        if let Some(dir) = dir {
            if let Some(t) = Self::load(ext, dir)? {
                return Ok(t);
            }
            let t = Self::build(ext, budget)?;
            t.save(ext, dir)?;
            return Ok(t);
        }
        Self::build(ext, budget)
    }
}
