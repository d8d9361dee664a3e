//! A fully built group: KL table, products, cells, `gamma` and `J`.

use std::sync::Arc;

use crate::cells::{compute_cells, CellDecomposition, GammaTable};
use crate::coxeter::{CoxeterSystem, ElementId};
use crate::error::{Error, Result};
use crate::hecke::{Hecke, KlTable};
use crate::jring::JRing;
use crate::truncated::TruncContext;

#[derive(Clone)]
pub struct Group {
    pub sys: Arc<CoxeterSystem>,
    pub hecke: Arc<Hecke>,
    pub cells: Arc<CellDecomposition>,
    pub gamma: Arc<GammaTable>,
    pub jring: JRing,
}

impl Group {
    /// Builds everything from scratch.
    pub fn from_type(spec: &str) -> Result<Self> {
        let sys = Arc::new(CoxeterSystem::from_type(spec)?);
        let kl = Arc::new(KlTable::build(&sys));
        Ok(Self::from_parts(sys, kl))
    }

    /// Builds products, cells and `gamma` on top of an existing KL table.
    pub fn from_parts(sys: Arc<CoxeterSystem>, kl: Arc<KlTable>) -> Self {
        let hecke = Arc::new(Hecke::new(sys.clone(), kl));
        hecke.precompute_all();
        let cells = Arc::new(compute_cells(&hecke));
        let gamma = Arc::new(GammaTable::build(&hecke, &cells));
        let jring = JRing::new(sys.clone(), cells.clone(), gamma.clone());
        Self { sys, hecke, cells, gamma, jring }
    }

    /// The same group with a replaced `gamma` table.
    pub fn with_gamma(&self, gamma: GammaTable) -> Self {
        let gamma = Arc::new(gamma);
        let jring = JRing::new(self.sys.clone(), self.cells.clone(), gamma.clone());
        Self { gamma, jring, ..self.clone() }
    }

    pub fn kl(&self) -> &KlTable {
        self.hecke.kl()
    }

    /// Index of the unique two-sided cell with the given `a`-value, or of
    /// the one containing `containing` when that is given.
    pub fn select_cell(&self, a: u32, containing: Option<ElementId>) -> Result<usize> {
        if let Some(w) = containing {
            let cell = self.cells.two_sided_of[w];
            return if self.cells.two_sided[cell].a == a {
                Ok(cell)
            } else {
                Err(Error::NoSuchCell(format!("{} lies in a cell with a = {}", self.sys.format_word(w), self.cells.two_sided[cell].a)))
            };
        }
        let hits: Vec<usize> = (0..self.cells.two_sided.len()).filter(|&i| self.cells.two_sided[i].a == a).collect();
        match hits.as_slice() {
            [] => Err(Error::NoSuchCell(format!("no two-sided cell with a = {a}"))),
            [i] => Ok(*i),
            _ => Err(Error::AmbiguousCell { a, count: hits.len() }),
        }
    }

    pub fn trunc(&self, cell: usize) -> TruncContext {
        TruncContext::new(self.jring.clone(), cell)
    }
}
