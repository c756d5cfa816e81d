//! Output document assembly: run manifests, payload checksums, and the
//! CSV/JSON renderers. All floats go through shortest round-trip decimal
//! formatting, so identical runs produce identical bytes.

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

pub(crate) const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reproducibility record attached to every output document: command
/// name, the fully resolved parameter set, tool version, and a checksum
/// of the payload the manifest describes.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub params: Vec<(String, String)>,
    pub checksum: String,
}

impl RunManifest {
    pub fn new(command: &str, params: Vec<(String, String)>, payload: &str) -> Self {
        Self {
            command: command.to_string(),
            version: VERSION.to_string(),
            params,
            checksum: format!("sha256:{}", sha256_hex(payload)),
        }
    }

    /// `#`-prefixed comment block placed above a CSV payload.
    pub fn comment_block(&self) -> String {
        let mut block = String::new();
        block.push_str(&format!("# steerswap-version = {}\n", self.version));
        block.push_str(&format!("# command = {}\n", self.command));
        for (key, value) in &self.params {
            block.push_str(&format!("# {key} = {value}\n"));
        }
        block.push_str(&format!("# checksum = {}\n", self.checksum));
        block
    }
}

impl Serialize for RunManifest {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Params<'a>(&'a [(String, String)]);
        impl Serialize for Params<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (key, value) in self.0 {
                    map.serialize_entry(key, value)?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("RunManifest", 4)?;
        st.serialize_field("command", &self.command)?;
        st.serialize_field("version", &self.version)?;
        st.serialize_field("params", &Params(&self.params))?;
        st.serialize_field("checksum", &self.checksum)?;
        st.end()
    }
}

pub(crate) fn sha256_hex(payload: &str) -> String {
    Sha256::digest(payload.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Full CSV document: manifest comment block, header row, data rows. The
/// checksum covers every byte below the comment block.
pub(crate) fn csv_document(
    command: &str,
    params: Vec<(String, String)>,
    header: &str,
    rows: &[String],
) -> String {
    let mut payload = String::with_capacity(header.len() + 1 + rows.len() * 32);
    payload.push_str(header);
    payload.push('\n');
    for row in rows {
        payload.push_str(row);
        payload.push('\n');
    }
    let manifest = RunManifest::new(command, params, &payload);
    let mut doc = manifest.comment_block();
    doc.push_str(&payload);
    doc
}

/// One scalar search result: the found value (`null` when the search
/// proved there is none in its bracket) and the tolerance it was
/// resolved to.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThresholdEntry {
    pub value: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdResults {
    #[serde(rename = "r_threshold_AtoD")]
    pub r_threshold_a_to_d: ThresholdEntry,
    #[serde(rename = "r_threshold_DtoA")]
    pub r_threshold_d_to_a: ThresholdEntry,
    #[serde(rename = "L_max_AtoD_km")]
    pub l_max_a_to_d_km: ThresholdEntry,
    #[serde(rename = "L_max_DtoA_km")]
    pub l_max_d_to_a_km: ThresholdEntry,
    #[serde(rename = "crossover_L1_km")]
    pub crossover_l1_km: ThresholdEntry,
    #[serde(rename = "crossover_L2_km")]
    pub crossover_l2_km: ThresholdEntry,
}

#[derive(Serialize)]
struct ThresholdsDoc<'a> {
    manifest: &'a RunManifest,
    results: &'a ThresholdResults,
}

/// JSON document for scalar results; the checksum covers the compact
/// serialization of the `results` object.
pub(crate) fn thresholds_document(
    params: Vec<(String, String)>,
    results: &ThresholdResults,
) -> String {
    let payload = serde_json::to_string(results).expect("results serialize");
    let manifest = RunManifest::new("thresholds", params, &payload);
    let doc = ThresholdsDoc { manifest: &manifest, results };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}
