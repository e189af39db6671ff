//! Output emission: RFC-4180 CSV tables and self-contained SVG charts.

pub mod svg;

/// Renders one CSV table into bytes: UTF-8, LF line endings, quoting
/// only where required.
pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header)
        .expect("writing to a Vec cannot fail");
    for row in rows {
        writer
            .write_record(&row)
            .expect("writing to a Vec cannot fail");
    }
    writer.into_inner().expect("writing to a Vec cannot fail")
}
