use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::monomial::MAX_VARS;
use crate::{KzError, Result};

/// Ordered list of variable names shared by every polynomial living in the
/// same ring. Cheap to clone.
#[derive(Clone, Eq)]
pub struct Vars(Arc<[String]>);

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, name) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(name)?;
        }
        Ok(())
    }
}

impl Vars {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARS {
            return Err(KzError::TooManyVariables(names.len()));
        }
        Ok(Vars(names.into()))
    }

    /// `z1, ..., zn`
    pub fn z(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("z{i}")))
    }

    /// `x, z1, ..., zn`
    pub fn xz(n: usize) -> Result<Self> {
        Self::new(core::iter::once(String::from("x")).chain((1..=n).map(|i| format!("z{i}"))))
    }

    /// `u1, ..., um`
    pub fn u(m: usize) -> Result<Self> {
        Self::new((1..=m).map(|i| format!("u{i}")))
    }

    /// `prefix1, ..., prefixm`
    pub fn indexed(prefix: &str, m: usize) -> Result<Self> {
        Self::new((1..=m).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(KzError::BadVariable { index, nvars: self.len() })
        }
    }

    /// The list with variable `index` removed.
    pub fn without(&self, index: usize) -> Result<Vars> {
        self.check_index(index)?;
        Self::new(self.0.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, n)| n.clone()))
    }

    /// The list with `name` appended at the end.
    pub fn with_appended(&self, name: &str) -> Result<Vars> {
        Self::new(self.0.iter().cloned().chain(core::iter::once(String::from(name))))
    }

    pub(crate) fn ensure_same(&self, other: &Vars) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(KzError::VariableMismatch { left: format!("{self}"), right: format!("{other}") })
        }
    }
}
