//! Evaluation report assembly: per-recording metric rows plus mean/std
//! aggregations over recordings and over participants.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::TrackKind;
use crate::segmetrics::SegEvalResult;
use crate::stats::{mean, sample_std};

/// Metric results of one recording across its evaluated tracks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordingEvalRow {
    pub recording_id: String,
    pub participant_id: String,
    pub results: BTreeMap<TrackKind, SegEvalResult>,
}

/// A full evaluation report over a recording set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    /// Per-recording rows, sorted by recording id.
    pub rows: Vec<RecordingEvalRow>,
    /// The overlap thresholds every row was evaluated at.
    pub taus: Vec<f64>,
}

/// Flattens one result into the fixed column order:
/// accuracy, edit, then (precision, recall, f1) per threshold.
fn metric_vector(result: &SegEvalResult) -> Vec<f64> {
    let mut v = vec![result.accuracy, result.edit];
    for (_, prf) in &result.f1 {
        v.push(prf.precision);
        v.push(prf.recall);
        v.push(prf.f1);
    }
    v
}

fn metric_headers(taus: &[f64]) -> Vec<String> {
    let mut headers = vec!["accuracy".to_string(), "edit".to_string()];
    for tau in taus {
        let pct = (tau * 100.0).round() as u32;
        headers.push(format!("f1_{pct}_precision"));
        headers.push(format!("f1_{pct}_recall"));
        headers.push(format!("f1_{pct}"));
    }
    headers
}

impl EvaluationReport {
    /// Builds a report, sorting rows by recording id for determinism.
    pub fn new(mut rows: Vec<RecordingEvalRow>, taus: Vec<f64>) -> EvaluationReport {
        rows.sort_by(|a, b| a.recording_id.cmp(&b.recording_id));
        EvaluationReport { rows, taus }
    }

    /// Tracks present in any row, in key order.
    fn tracks(&self) -> Vec<TrackKind> {
        let mut tracks: Vec<TrackKind> =
            self.rows.iter().flat_map(|r| r.results.keys().copied()).collect();
        tracks.sort();
        tracks.dedup();
        tracks
    }

    /// Per-metric column values of every recording for `track`.
    fn columns_for(&self, track: TrackKind) -> Vec<(String, Vec<f64>)> {
        self.rows
            .iter()
            .filter_map(|r| {
                r.results.get(&track).map(|res| (r.recording_id.clone(), metric_vector(res)))
            })
            .collect()
    }

    /// Participant-level metric vectors for `track`: each participant's
    /// recordings averaged element-wise first.
    fn participant_columns_for(&self, track: TrackKind) -> Vec<(String, Vec<f64>)> {
        let mut by_participant: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
        for row in &self.rows {
            if let Some(res) = row.results.get(&track) {
                by_participant
                    .entry(row.participant_id.clone())
                    .or_default()
                    .push(metric_vector(res));
            }
        }
        by_participant
            .into_iter()
            .map(|(pid, vectors)| {
                let width = vectors[0].len();
                let averaged: Vec<f64> = (0..width)
                    .map(|i| mean(&vectors.iter().map(|v| v[i]).collect::<Vec<f64>>()))
                    .collect();
                (pid, averaged)
            })
            .collect()
    }

    /// Machine-readable CSV: one row per (recording, track), followed by
    /// mean/std rows aggregated over recordings and over participants.
    /// Floats are printed in shortest round-trip form, so output is
    /// byte-stable for identical inputs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("row,track,");
        out.push_str(&metric_headers(&self.taus).join(","));
        out.push('\n');
        for track in self.tracks() {
            for (recording_id, values) in self.columns_for(track) {
                write_csv_row(&mut out, &recording_id, track, &values);
            }
            let recording_vectors: Vec<Vec<f64>> =
                self.columns_for(track).into_iter().map(|(_, v)| v).collect();
            let participant_vectors: Vec<Vec<f64>> =
                self.participant_columns_for(track).into_iter().map(|(_, v)| v).collect();
            for (name, vectors) in [
                ("mean_recordings", &recording_vectors),
                ("std_recordings", &recording_vectors),
                ("mean_participants", &participant_vectors),
                ("std_participants", &participant_vectors),
            ] {
                if vectors.is_empty() {
                    continue;
                }
                let width = vectors[0].len();
                let agg: Vec<f64> = (0..width)
                    .map(|i| {
                        let column: Vec<f64> = vectors.iter().map(|v| v[i]).collect();
                        if name.starts_with("mean") {
                            mean(&column)
                        } else {
                            sample_std(&column)
                        }
                    })
                    .collect();
                write_csv_row(&mut out, name, track, &agg);
            }
        }
        out
    }

    /// Human-readable fixed-width summary (two decimals), one block per
    /// track, mirroring the mean ± std presentation of evaluation tables.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let headers = metric_headers(&self.taus);
        for track in self.tracks() {
            let _ = writeln!(out, "track: {track}");
            let rows = self.columns_for(track);
            let name_width =
                rows.iter().map(|(n, _)| n.len()).chain([16]).max().unwrap_or(16);
            let _ = write!(out, "  {:<name_width$}", "recording");
            for h in &headers {
                let _ = write!(out, " {h:>18}");
            }
            out.push('\n');
            for (name, values) in &rows {
                let _ = write!(out, "  {name:<name_width$}");
                for v in values {
                    let _ = write!(out, " {v:>18.2}");
                }
                out.push('\n');
            }
            let vectors: Vec<Vec<f64>> = rows.into_iter().map(|(_, v)| v).collect();
            if !vectors.is_empty() {
                let width = vectors[0].len();
                let _ = write!(out, "  {:<name_width$}", "mean +/- std");
                for i in 0..width {
                    let column: Vec<f64> = vectors.iter().map(|v| v[i]).collect();
                    let cell = format!("{:.2} +/- {:.2}", mean(&column), sample_std(&column));
                    let _ = write!(out, " {cell:>18}");
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

fn write_csv_row(out: &mut String, name: &str, track: TrackKind, values: &[f64]) {
    let _ = write!(out, "{name},{track}");
    for v in values {
        let _ = write!(out, ",{v}");
    }
    out.push('\n');
}
