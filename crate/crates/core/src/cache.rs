//! On-disk cache of solved configurations, one JSON file per `(model, k)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::fekete::{Certificate, Configuration, SolverMeta};
use crate::geometry::{Model, Point};
use crate::sections::SectionSpace;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheFile {
    pub schema_version: u32,
    pub model: Model,
    pub k: u32,
    pub points: Vec<Vec<f64>>,
    pub log_vdm: f64,
    pub certificate: Certificate,
    pub solver_meta: SolverMeta,
}

impl CacheFile {
    pub fn from_config(c: &Configuration) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            model: c.model(),
            k: c.k(),
            points: c.points.iter().map(Point::to_reals).collect(),
            log_vdm: c.log_vdm,
            certificate: c.certificate,
            solver_meta: c.solver_meta,
        }
    }

    pub fn into_config(self) -> Result<Configuration> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let space = SectionSpace::new(self.model, self.k);
        if self.points.len() != space.dim() {
            return Err(Error::Schema(format!("{} points for N = {}", self.points.len(), space.dim())));
        }
        let points = self
            .points
            .iter()
            .map(|r| Point::from_reals(self.model, r).map_err(|e| Error::Schema(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration {
            space,
            points,
            log_vdm: self.log_vdm,
            certificate: self.certificate,
            solver_meta: self.solver_meta,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, model: Model, k: u32) -> PathBuf {
        self.dir.join(format!("{model}-k{k}.json"))
    }

    /// Writes through a temporary file in the cache directory and renames it
    /// into place.
    pub fn save(&self, config: &Configuration) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let json = serde_json::to_string_pretty(&CacheFile::from_config(config)).map_err(std::io::Error::other)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(json.as_bytes())?;
        tmp.as_file().sync_all()?;
        let path = self.path(config.model(), config.k());
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(path)
    }

    /// `Ok(None)` when no entry exists.
    pub fn load(&self, model: Model, k: u32) -> Result<Option<Configuration>> {
        let path = self.path(model, k);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let file: CacheFile =
            serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        if file.model != model || file.k != k {
            return Err(Error::Schema(format!("{} holds {} k={}", path.display(), file.model, file.k)));
        }
        file.into_config().map(Some)
    }

    /// `(model, k)` of every entry, sorted.
    pub fn entries(&self) -> Result<Vec<(Model, u32)>> {
        let mut out = Vec::new();
        let dir = match fs::read_dir(&self.dir) {
            Ok(d) => d,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in dir {
            let name = entry?.file_name();
            let Some(stem) = name.to_str().and_then(|n| n.strip_suffix(".json")) else { continue };
            let Some((model, k)) = stem.rsplit_once("-k") else { continue };
            if let (Ok(model), Ok(k)) = (model.parse::<Model>(), k.parse::<u32>()) {
                out.push((model, k));
            }
        }
        out.sort_by_key(|&(m, k)| (m.name(), k));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fekete::SolverMeta;
    use crate::geometry::ProjPoint;

    fn antipodal() -> Configuration {
        let space = SectionSpace::new(Model::Cp1, 1);
        let pts = vec![
            Point::Cp1(ProjPoint::from_sphere([0.0, 0.0, 1.0])),
            Point::Cp1(ProjPoint::from_sphere([0.0, 0.0, -1.0])),
        ];
        Configuration::from_points(&space, pts, SolverMeta { seed: 7, starts: 1, iterations: 0 }).unwrap()
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let c = antipodal();
        cache.save(&c).unwrap();
        let d = cache.load(Model::Cp1, 1).unwrap().unwrap();
        assert_eq!(c.points, d.points);
        assert_eq!(c.log_vdm, d.log_vdm);
        assert_eq!(c.certificate, d.certificate);
        assert_eq!(c.solver_meta, d.solver_meta);
        assert_eq!(cache.entries().unwrap(), vec![(Model::Cp1, 1)]);
        assert!(cache.load(Model::Cp1, 2).unwrap().is_none());
    }

    #[test]
    fn corrupt_and_stale_files() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        fs::write(cache.path(Model::Cp1, 3), "{not json").unwrap();
        assert!(matches!(cache.load(Model::Cp1, 3), Err(Error::Schema(_))));
        let mut f = CacheFile::from_config(&antipodal());
        f.schema_version = 99;
        fs::write(cache.path(Model::Cp1, 1), serde_json::to_string(&f).unwrap()).unwrap();
        assert!(matches!(cache.load(Model::Cp1, 1), Err(Error::Schema(_))));
    }
}
