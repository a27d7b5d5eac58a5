//! Variable identities: dense integer ids with a side table of display names.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{IpsError, Result};

pub type VarId = u32;

/// Interning table mapping display names like `x3`, `y0`, `t_{1,2}` to dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl VarTable {
    pub fn new() -> VarTable {
        VarTable::default()
    }

    pub fn from_names<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Result<VarTable> {
        let mut t = VarTable::new();
        for n in names {
            t.intern(&n.into())?;
        }
        Ok(t)
    }

    pub fn intern(&mut self, name: &str) -> Result<VarId> {
        if let Some(&id) = self.index.get(name) {
            return Ok(id);
        }
        if name.is_empty() {
            return Err(IpsError::InvalidParameter("empty variable name".into()));
        }
        let id = self.names.len() as VarId;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        0..self.names.len() as VarId
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Union of several tables; names are interned in first-seen order.
pub fn union_tables<'a, I: IntoIterator<Item = &'a VarTable>>(tables: I) -> Arc<VarTable> {
    let mut out = VarTable::new();
    for t in tables {
        for n in t.names() {
            out.intern(n).expect("non-empty name");
        }
    }
    Arc::new(out)
}
