#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chordarc/bmo.hpp"
#include "chordarc/embedding.hpp"
#include "chordarc/extension.hpp"
#include "chordarc/monotone_map.hpp"
#include "chordarc/weights.hpp"
#include "chordarc/welding.hpp"
#include "json.hpp"

namespace chordarc::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "chordarc-lab/1";

json to_json(cplx z);
json to_json(const Function& f);
json to_json(const LogSumFunction& f);
json to_json(const PiecewiseLinearMap& f);
json to_json(const MonotoneMap& f);
json to_json(Interval I);
json to_json(const BmoResult& r);
json to_json(const FamilySup& r);
json to_json(const DoublingFit& r);
json to_json(const WeightReport& r);
json to_json(const ChordArcReport& r);
json to_json(const WeldingResult& r);

// Parsers throw InvalidInputError on malformed documents.
cplx complex_from_json(const json& j);
Function function_from_json(const json& j);
MonotoneMap map_from_json(const json& j);
EmbeddingCurve curve_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump(const json& j);  // indented, trailing newline

// %.17g
std::string fmt(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string field_csv(const HeatExtensionField& F, const BeltramiField& mu);

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};
// Static line plot; log_x plots log10 of the abscissa.
std::string svg_plot(const std::string& title, const std::vector<SvgSeries>& series, bool log_x = false,
                     bool equal_aspect = false);

}  // namespace chordarc::io
