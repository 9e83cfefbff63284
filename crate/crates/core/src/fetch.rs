//! Download-and-cache access to the Harwell-Boeing `can_*` matrices.
//!
//! A cached `<name>.mtx` under the cache directory is always used first, so
//! everything works offline once the files are in place.

use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use flate2::read::GzDecoder;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::mtx::parse_matrix_market;

pub const CACHE_DIR_ENV: &str = "MBMP_CACHE_DIR";
pub const BASE_URL_ENV: &str = "MBMP_BASE_URL";
pub const DEFAULT_BASE_URL: &str = "https://math.nist.gov/pub/MatrixMarket2/Harwell-Boeing/cannes";
pub const DEFAULT_CACHE_DIR: &str = "data/instances";

/// The instances used in the comparison tables, smallest first.
pub const BENCHMARK_INSTANCES: [&str; 9] = [
    "can_24", "can_61", "can_62", "can_73", "can_96", "can_187", "can_229", "can_256", "can_268",
];

/// Every matrix of the CANNES set.
pub const KNOWN_INSTANCES: [&str; 18] = [
    "can_24", "can_61", "can_62", "can_73", "can_96", "can_144", "can_161", "can_187", "can_229",
    "can_256", "can_268", "can_292", "can_445", "can_634", "can_715", "can_838", "can_1054",
    "can_1072",
];

/// Something that can GET a URL. Swappable so tests never touch the network.
pub trait Transport: Sync {
    fn get(&self, url: &str) -> Result<Vec<u8>>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct HttpTransport;

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>> {
        let net = |e: ureq::Error| Error::Network {
            url: url.to_string(),
            reason: e.to_string(),
        };
        let mut resp = ureq::get(url).call().map_err(net)?;
        resp.body_mut()
            .with_config()
            .limit(256 * 1024 * 1024)
            .read_to_vec()
            .map_err(net)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchConfig {
    pub cache_dir: PathBuf,
    pub base_url: String,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            base_url: DEFAULT_BASE_URL.to_string(),
        }
    }
}

impl FetchConfig {
    /// Defaults overridden by `MBMP_CACHE_DIR` and `MBMP_BASE_URL`.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        if let Ok(url) = std::env::var(BASE_URL_ENV) {
            if !url.is_empty() {
                cfg.base_url = url;
            }
        }
        cfg
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = dir.into();
        self
    }
}

/// Name of a CANNES matrix in the NIST archive, padded to eight characters
/// with underscores: `can_24` is stored as `can___24`.
pub fn archive_stem(name: &str) -> Option<String> {
    let digits = name.strip_prefix("can_")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 5 {
        return None;
    }
    Some(format!("can{}{}", "_".repeat(5 - digits.len()), digits))
}

struct Source {
    name: String,
    url: String,
    aliases: Vec<String>,
}

fn resolve(name: &str, cfg: &FetchConfig) -> Result<Source> {
    if name.starts_with("http://") || name.starts_with("https://") {
        let file = name.rsplit('/').next().unwrap_or_default();
        let stem = file
            .trim_end_matches(".gz")
            .trim_end_matches(".mtx")
            .to_string();
        if stem.is_empty() {
            return Err(Error::UnknownInstance(name.to_string()));
        }
        return Ok(Source {
            name: stem,
            url: name.to_string(),
            aliases: Vec::new(),
        });
    }
    if !KNOWN_INSTANCES.contains(&name) {
        return Err(Error::UnknownInstance(name.to_string()));
    }
    let stem = archive_stem(name).expect("known names are well formed");
    Ok(Source {
        name: name.to_string(),
        url: format!("{}/{}.mtx.gz", cfg.base_url.trim_end_matches('/'), stem),
        aliases: vec![stem],
    })
}

fn name_lock(name: &str) -> Arc<Mutex<()>> {
    static LOCKS: OnceLock<Mutex<HashMap<String, Arc<Mutex<()>>>>> = OnceLock::new();
    let mut map = LOCKS.get_or_init(Default::default).lock().unwrap();
    map.entry(name.to_string()).or_default().clone()
}

fn decode(bytes: Vec<u8>, url: &str) -> Result<String> {
    let raw = if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(bytes.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::Network {
                url: url.to_string(),
                reason: format!("gzip: {e}"),
            })?;
        out
    } else {
        bytes
    };
    String::from_utf8(raw).map_err(|_| Error::Network {
        url: url.to_string(),
        reason: "response is not UTF-8 text".into(),
    })
}

fn read_cached(path: &Path, name: &str) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(&text, name)
}

/// Path the instance is cached under.
pub fn cache_path(name: &str, cfg: &FetchConfig) -> Result<PathBuf> {
    let src = resolve(name, cfg)?;
    Ok(cfg.cache_dir.join(format!("{}.mtx", src.name)))
}

/// Loads `name` from the cache, downloading it over HTTP on a miss.
pub fn fetch_instance(name: &str, cfg: &FetchConfig) -> Result<Instance> {
    fetch_instance_with(name, cfg, &HttpTransport)
}

pub fn fetch_instance_with(name: &str, cfg: &FetchConfig, transport: &dyn Transport) -> Result<Instance> {
    let src = resolve(name, cfg)?;
    let lock = name_lock(&src.name);
    let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());

    let primary = cfg.cache_dir.join(format!("{}.mtx", src.name));
    let candidates = std::iter::once(primary.clone())
        .chain(src.aliases.iter().map(|a| cfg.cache_dir.join(format!("{a}.mtx"))));
    for path in candidates {
        if path.is_file() {
            return read_cached(&path, &src.name);
        }
    }

    let text = decode(transport.get(&src.url)?, &src.url)?;
    let inst = parse_matrix_market(&text, &src.name)?;

    fs::create_dir_all(&cfg.cache_dir).map_err(|e| Error::io(&cfg.cache_dir, e))?;
    let tmp = cfg.cache_dir.join(format!(".{}.mtx.part", src.name));
    fs::write(&tmp, text.as_bytes()).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &primary).map_err(|e| Error::io(&primary, e))?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn archive_names() {
        assert_eq!(archive_stem("can_24").as_deref(), Some("can___24"));
        assert_eq!(archive_stem("can_187").as_deref(), Some("can__187"));
        assert_eq!(archive_stem("can_1054").as_deref(), Some("can_1054"));
        assert_eq!(archive_stem("bcsstk01"), None);
    }

    #[test]
    fn url_resolution() {
        let cfg = FetchConfig {
            cache_dir: "c".into(),
            base_url: "http://host/mm/".into(),
        };
        assert_eq!(resolve("can_61", &cfg).unwrap().url, "http://host/mm/can___61.mtx.gz");
        let direct = resolve("https://x.org/a/foo.mtx.gz", &cfg).unwrap();
        assert_eq!(direct.name, "foo");
        assert!(matches!(resolve("no_such", &cfg), Err(Error::UnknownInstance(_))));
    }
}
