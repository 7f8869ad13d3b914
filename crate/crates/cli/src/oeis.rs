//! OEIS b-file download with an on-disk cache.

use std::io::Write;
use std::path::{Path, PathBuf};

use ansatzkit::format::bfile::parse_bfile;
use ansatzkit::Sequence;

use crate::error::{CliError, CliResult};

const DEFAULT_URL: &str = "https://oeis.org/{id}/b{num}.txt";

/// Validates an A-number and returns it with its six digits.
pub fn parse_id(id: &str) -> CliResult<(String, String)> {
    let id = id.trim().to_ascii_uppercase();
    let digits = id.strip_prefix('A').unwrap_or("");
    if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Usage(format!(
            "`{id}` is not an OEIS id of the form A000045"
        )));
    }
    let num = digits.to_string();
    Ok((id, num))
}

fn cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("ANSATZKIT_CACHE") {
        return Some(PathBuf::from(dir));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("ansatzkit"))
}

fn download(url: &str, id: &str) -> CliResult<String> {
    if let Some(path) = url.strip_prefix("file://") {
        return match std::fs::read_to_string(path) {
            Ok(s) => Ok(s),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                Err(CliError::NotFound(id.to_string()))
            }
            Err(e) => Err(CliError::io(path, e)),
        };
    }
    let resp = reqwest::blocking::get(url).map_err(|e| CliError::Network(e.to_string()))?;
    if resp.status() == reqwest::StatusCode::NOT_FOUND {
        return Err(CliError::NotFound(id.to_string()));
    }
    let resp = resp
        .error_for_status()
        .map_err(|e| CliError::Network(e.to_string()))?;
    resp.text().map_err(|e| CliError::Network(e.to_string()))
}

/// Writes through a temporary file in the same directory so that readers
/// never observe a partial b-file.
fn store(dir: &Path, file: &Path, text: &str) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir.display(), e))?;
    tmp.write_all(text.as_bytes())
        .map_err(|e| CliError::io(file.display(), e))?;
    tmp.persist(file)
        .map_err(|e| CliError::io(file.display(), e.error))?;
    Ok(())
}

/// The b-file text for `id`, from the cache when present.
pub fn fetch_text(id: &str) -> CliResult<String> {
    let (id, num) = parse_id(id)?;
    let cached = cache_dir().map(|d| (d.clone(), d.join(format!("b{num}.txt"))));
    if let Some((_, file)) = &cached {
        if let Ok(text) = std::fs::read_to_string(file) {
            return Ok(text);
        }
    }
    let template = std::env::var("ANSATZKIT_OEIS_URL").unwrap_or_else(|_| DEFAULT_URL.to_string());
    let url = template.replace("{id}", &id).replace("{num}", &num);
    let text = download(&url, &id)?;
    // validate before caching so a bad response is not kept
    parse_bfile(&text)?;
    if let Some((dir, file)) = &cached {
        store(dir, file, &text)?;
    }
    Ok(text)
}

pub fn fetch(id: &str) -> CliResult<Sequence> {
    Ok(parse_bfile(&fetch_text(id)?)?)
}
