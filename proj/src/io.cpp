#include "hzreach/io.hpp"

#include "hzreach/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hzreach::io
{

namespace
{

[[noreturn]] void bad(const std::string& what, const std::string& reason)
{
    throw FormatError(what, reason);
}

double number(const Json& j, const std::string& what)
{
    if (!j.is_number())
        bad(what, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        bad(what, "non-finite number");
    return v;
}

} // namespace

Json matrix_to_json(const Matrix& M)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
    {
        Json r = Json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k)
            r.push_back(M(i, k));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json vector_to_json(const Vector& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what)
{
    if (!j.is_array())
        bad(what, "expected an array of rows");
    const auto r = static_cast<Eigen::Index>(j.size());
    Eigen::Index c = -1;
    for (const auto& row : j)
    {
        if (!row.is_array())
            bad(what, "expected an array of rows");
        const auto len = static_cast<Eigen::Index>(row.size());
        if (c >= 0 && len != c)
            bad(what, "ragged rows");
        c = len;
    }
    if (c < 0)
        c = cols >= 0 ? cols : 0;
    if (rows >= 0 && r != rows && !(r == 0 && c == 0))
        bad(what, "expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
    if (cols >= 0 && c != cols && r > 0)
        bad(what, "expected " + std::to_string(cols) + " columns, got " + std::to_string(c));
    const Eigen::Index R = (r == 0 && rows >= 0) ? rows : r;
    const Eigen::Index C = (r == 0 && cols >= 0) ? cols : c;
    Matrix M = Matrix::Zero(R, C);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index k = 0; k < c; ++k)
            M(i, k) = number(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], what);
    return M;
}

Vector vector_from_json(const Json& j, const std::string& what)
{
    if (!j.is_array())
        bad(what, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = number(j[i], what);
    return v;
}

Json set_to_json(const HybridZonotope& Z)
{
    Json j = Json::object();
    j["c"] = vector_to_json(Z.c());
    if (Z.num_continuous() > 0)
        j["Gc"] = matrix_to_json(Z.Gc());
    if (Z.num_binary() > 0)
        j["Gb"] = matrix_to_json(Z.Gb());
    if (Z.num_constraints() > 0)
    {
        if (Z.num_continuous() > 0)
            j["Ac"] = matrix_to_json(Z.Ac());
        if (Z.num_binary() > 0)
            j["Ab"] = matrix_to_json(Z.Ab());
        j["b"] = vector_to_json(Z.b());
    }
    return j;
}

HybridZonotope set_from_json(const Json& j)
{
    if (!j.is_object())
        bad("set", "expected an object");
    if (!j.contains("c"))
        bad("set.c", "missing center");
    const Vector c = vector_from_json(j["c"], "set.c");
    const auto n = c.size();
    const Matrix Gc = j.contains("Gc") ? matrix_from_json(j["Gc"], n, -1, "set.Gc") : Matrix(n, 0);
    const Matrix Gb = j.contains("Gb") ? matrix_from_json(j["Gb"], n, -1, "set.Gb") : Matrix(n, 0);
    const Vector b = j.contains("b") ? vector_from_json(j["b"], "set.b") : Vector(0);
    const auto nc = b.size();
    const Matrix Ac = j.contains("Ac") ? matrix_from_json(j["Ac"], nc, Gc.cols(), "set.Ac") : Matrix::Zero(nc, Gc.cols());
    const Matrix Ab = j.contains("Ab") ? matrix_from_json(j["Ab"], nc, Gb.cols(), "set.Ab") : Matrix::Zero(nc, Gb.cols());
    try
    {
        return HybridZonotope(c, Gc, Gb, Ac, Ab, b);
    }
    catch (const std::exception& e)
    {
        bad("set", e.what());
    }
}

Json network_to_json(const NeuralNetwork& net)
{
    Json layers = Json::array();
    for (const auto& L : net.layers())
        layers.push_back(Json{{"W", matrix_to_json(L.W)}, {"v", vector_to_json(L.v)}});
    return Json{{"layers", layers}};
}

NeuralNetwork network_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array())
        bad("network.layers", "expected an array of layers");
    std::vector<Layer> layers;
    for (std::size_t k = 0; k < j["layers"].size(); ++k)
    {
        const auto& L = j["layers"][k];
        const std::string where = "network.layers[" + std::to_string(k) + "]";
        if (!L.is_object() || !L.contains("W") || !L.contains("v"))
            bad(where, "each layer needs W and v");
        layers.push_back({matrix_from_json(L["W"], -1, -1, where + ".W"), vector_from_json(L["v"], where + ".v")});
    }
    try
    {
        return NeuralNetwork(std::move(layers));
    }
    catch (const std::exception& e)
    {
        bad("network", e.what());
    }
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        bad(path.string(), "cannot open file");
    try
    {
        return Json::parse(in);
    }
    catch (const Json::parse_error& e)
    {
        bad(path.string(), e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        bad(path.string(), "cannot write file");
    out << j.dump(1) << '\n';
}

HybridZonotope load_set(const std::filesystem::path& path)
{
    try
    {
        return set_from_json(read_json(path));
    }
    catch (const FormatError& e)
    {
        if (e.path() == path.string())
            throw;
        throw FormatError(path.string(), e.path() + ": " + e.reason());
    }
}

void save_set(const std::filesystem::path& path, const HybridZonotope& Z)
{
    write_json(path, set_to_json(Z));
}

NeuralNetwork load_network(const std::filesystem::path& path)
{
    try
    {
        return network_from_json(read_json(path));
    }
    catch (const FormatError& e)
    {
        if (e.path() == path.string())
            throw;
        throw FormatError(path.string(), e.path() + ": " + e.reason());
    }
}

void save_network(const std::filesystem::path& path, const NeuralNetwork& net)
{
    write_json(path, network_to_json(net));
}

Json complexity_to_json(const Complexity& c)
{
    return Json{{"n", c.n}, {"n_g", c.n_g}, {"n_b", c.n_b}, {"n_c", c.n_c}, {"order", c.order}};
}

namespace
{

Json number_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

} // namespace

Json verdict_to_json(const Verdict& v)
{
    Json steps = Json::array();
    for (const auto& s : v.steps)
    {
        Json e{{"t", s.t},
               {"status", to_string(s.status)},
               {"optimum", number_or_null(s.optimum)},
               {"optimum_exact", s.optimum_exact},
               {"nodes", s.nodes}};
        if (s.witness)
            e["witness"] = vector_to_json(*s.witness);
        steps.push_back(std::move(e));
    }
    return Json{{"overall", to_string(v.overall)}, {"steps", steps}};
}

} // namespace hzreach::io
