//! Binary snapshot of a frozen graph.
//!
//! Layout (little endian):
//! `magic[8] version:u32 max_hops:u32 type_relation:str`
//! `n_entities:u32 str* n_relations:u32 str* n_triples:u64 (h:u32 r:u32 t:u32)*`
//! where `str` is `len:u32 utf8[len]`. Indexes are rebuilt on load.

use std::io::{Read, Write};

use super::{GraphConfig, Interner, KnowledgeGraph};
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"KGFACT\0S";
const SNAPSHOT_VERSION: u32 = 1;

fn put_u32<W: Write>(w: &mut W, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn put_str<W: Write>(w: &mut W, s: &str) -> Result<()> {
    let len = u32::try_from(s.len()).map_err(|_| Error::Snapshot("string too long".into()))?;
    put_u32(w, len)?;
    w.write_all(s.as_bytes())?;
    Ok(())
}

fn get_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_str<R: Read>(r: &mut R) -> Result<String> {
    let len = get_u32(r)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf).map_err(|_| Error::Snapshot("invalid utf-8".into()))
}

fn get_interner<R: Read>(r: &mut R) -> Result<Interner> {
    let n = get_u32(r)?;
    let mut interner = Interner::default();
    for i in 0..n {
        let name = get_str(r)?;
        if interner.intern(&name) != i {
            return Err(Error::Snapshot(format!("duplicate symbol {name:?}")));
        }
    }
    Ok(interner)
}

impl KnowledgeGraph {
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        put_u32(&mut w, SNAPSHOT_VERSION)?;
        put_u32(&mut w, self.config.max_hops as u32)?;
        put_str(&mut w, &self.config.type_relation)?;
        for interner in [&self.entities, &self.relations] {
            put_u32(&mut w, interner.len() as u32)?;
            for name in interner.names() {
                put_str(&mut w, name)?;
            }
        }
        w.write_all(&(self.triple_count() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(12 * 4096);
        for t in self.triples() {
            buf.extend_from_slice(&t.head.0.to_le_bytes());
            buf.extend_from_slice(&t.relation.0.to_le_bytes());
            buf.extend_from_slice(&t.tail.0.to_le_bytes());
            if buf.len() >= 12 * 4096 {
                w.write_all(&buf)?;
                buf.clear();
            }
        }
        w.write_all(&buf)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|_| Error::Snapshot("missing header".into()))?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::Snapshot("bad magic".into()));
        }
        let version = get_u32(&mut r)?;
        if version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let max_hops = get_u32(&mut r)? as usize;
        let type_relation = get_str(&mut r)?;
        let entities = get_interner(&mut r)?;
        let relations = get_interner(&mut r)?;
        let n = get_u64(&mut r)?;
        let mut triples = Vec::with_capacity(n.min(1 << 28) as usize);
        let mut b = [0u8; 12];
        for _ in 0..n {
            r.read_exact(&mut b)?;
            let h = u32::from_le_bytes([b[0], b[1], b[2], b[3]]);
            let rel = u32::from_le_bytes([b[4], b[5], b[6], b[7]]);
            let t = u32::from_le_bytes([b[8], b[9], b[10], b[11]]);
            if h as usize >= entities.len()
                || t as usize >= entities.len()
                || rel as usize >= relations.len()
            {
                return Err(Error::Snapshot("triple handle out of range".into()));
            }
            triples.push((h, rel, t));
        }
        let config = GraphConfig {
            type_relation,
            max_hops,
        };
        Ok(KnowledgeGraph::from_parts(
            entities, relations, triples, config,
        ))
    }

    /// True when `bytes` begins with the snapshot magic.
    pub fn is_snapshot(bytes: &[u8]) -> bool {
        bytes.starts_with(SNAPSHOT_MAGIC)
    }
}
