#include "lcs/envs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace lcs {

// --- multiplexer ----------------------------------------------------------

BitInput MultiplexerTask::sample(RandomStream& rng) const {
    BitInput bits(input_length());
    for (auto& b : bits)
        b = static_cast<std::uint8_t>(rng.index(2));
    return bits;
}

bool mux_eval(const MultiplexerTask& task, const BitInput& bits) {
    if (bits.size() != task.input_length())
        throw ConfigError("multiplexer input must have length " +
                          std::to_string(task.input_length()) + ", got " +
                          std::to_string(bits.size()));
    std::size_t address = 0;
    for (std::size_t i = 0; i < task.k; ++i)
        address = (address << 1) | bits[i]; // most significant first
    return bits[task.k + address] != 0;
}

// --- maze -----------------------------------------------------------------

const int kMazeDir[8][2] = {
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
};

MazeWorld MazeWorld::from_text(const std::string& text) {
    MazeWorld world;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool has_food = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (world.cols_ == 0)
            world.cols_ = static_cast<int>(line.size());
        else if (static_cast<int>(line.size()) != world.cols_)
            throw LoadError("maze rows must all have the same width", line_no);
        for (std::size_t c = 0; c < line.size(); ++c) {
            switch (line[c]) {
            case '.': world.grid_.push_back(Cell::Empty); break;
            case 'T': world.grid_.push_back(Cell::Obstacle); break;
            case 'F':
                world.grid_.push_back(Cell::Food);
                has_food = true;
                break;
            case '*':
                world.grid_.push_back(Cell::Empty);
                world.start_row_ = world.rows_;
                world.start_col_ = static_cast<int>(c);
                break;
            default:
                throw LoadError(std::string("invalid maze character '") + line[c] + "'", line_no);
            }
        }
        ++world.rows_;
    }
    if (world.rows_ == 0)
        throw LoadError("maze map is empty", 0);
    if (!has_food)
        throw LoadError("maze map has no food cell", 0);
    return world;
}

MazeWorld MazeWorld::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open maze map '" + path + "'", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

Cell MazeWorld::at(int row, int col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        return Cell::Obstacle;
    return grid_[static_cast<std::size_t>(row) * cols_ + col];
}

std::vector<std::pair<int, int>> MazeWorld::empty_cells() const {
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) == Cell::Empty)
                cells.emplace_back(r, c);
    return cells;
}

void MazeWorld::reset(RandomStream& rng) {
    if (start_row_ >= 0) {
        agent_row_ = start_row_;
        agent_col_ = start_col_;
        return;
    }
    const auto cells = empty_cells();
    if (cells.empty())
        throw ConfigError("maze has no empty cell to place the agent");
    const auto [r, c] = cells[rng.index(cells.size())];
    agent_row_ = r;
    agent_col_ = c;
}

void MazeWorld::place_agent(int row, int col) {
    if (at(row, col) != Cell::Empty)
        throw InputError("agent must be placed on an empty cell");
    agent_row_ = row;
    agent_col_ = col;
}

BitInput MazeWorld::sense() const {
    BitInput bits;
    bits.reserve(16);
    for (const auto& dir : kMazeDir) {
        switch (at(agent_row_ + dir[0], agent_col_ + dir[1])) {
        case Cell::Empty:
            bits.push_back(0);
            bits.push_back(0);
            break;
        case Cell::Obstacle:
            bits.push_back(1);
            bits.push_back(0);
            break;
        case Cell::Food:
            bits.push_back(1);
            bits.push_back(1);
            break;
        }
    }
    return bits;
}

MazeWorld::StepResult MazeWorld::step(int action) {
    if (action < 0 || action > 7)
        throw InputError("maze action must be in 0..7, got " + std::to_string(action));
    const int r = agent_row_ + kMazeDir[action][0];
    const int c = agent_col_ + kMazeDir[action][1];
    switch (at(r, c)) {
    case Cell::Obstacle:
        return {0.0, false};
    case Cell::Food:
        return {food_reward_, true};
    case Cell::Empty:
        agent_row_ = r;
        agent_col_ = c;
        return {0.0, false};
    }
    return {0.0, false};
}

double MazeWorld::optimal_mean_steps() const {
    // Multi-source BFS outward from food over the 8-connected empty cells.
    constexpr int kUnreached = std::numeric_limits<int>::max();
    std::vector<int> dist(grid_.size(), kUnreached);
    std::deque<std::pair<int, int>> frontier;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) == Cell::Food) {
                dist[static_cast<std::size_t>(r) * cols_ + c] = 0;
                frontier.emplace_back(r, c);
            }
    while (!frontier.empty()) {
        const auto [r, c] = frontier.front();
        frontier.pop_front();
        const int d = dist[static_cast<std::size_t>(r) * cols_ + c];
        for (const auto& dir : kMazeDir) {
            const int nr = r + dir[0];
            const int nc = c + dir[1];
            if (at(nr, nc) != Cell::Empty)
                continue;
            auto& cell = dist[static_cast<std::size_t>(nr) * cols_ + nc];
            if (cell > d + 1) {
                cell = d + 1;
                frontier.emplace_back(nr, nc);
            }
        }
    }
    double total = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) == Cell::Empty) {
                const int d = dist[static_cast<std::size_t>(r) * cols_ + c];
                if (d == kUnreached)
                    throw ConfigError("maze has an empty cell with no path to food");
                total += d;
                ++count;
            }
    if (count == 0)
        throw ConfigError("maze has no empty cells");
    return total / static_cast<double>(count);
}

// --- cluster generator -----------------------------------------------------

void ClusterGenerator::validate() const {
    if (d == 0)
        throw ConfigError("cluster generator needs d >= 1");
    if (components.empty())
        throw ConfigError("cluster generator needs at least one component");
    if (components.size() != weights.size())
        throw ConfigError("cluster weights must match component count");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0)
            throw ConfigError("cluster weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("cluster weights must sum to 1");
    for (const auto& comp : components)
        if (comp.mean.size() != d || comp.sigma.size() != d)
            throw ConfigError("cluster component dimension mismatch");
}

std::size_t ClusterGenerator::sample_component(RandomStream& rng) const {
    const double target = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (target < cum)
            return i;
    }
    return weights.size() - 1;
}

std::vector<double> ClusterGenerator::sample(RandomStream& rng) const {
    const std::size_t comp = sample_component(rng);
    std::vector<double> point(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double v = components[comp].mean[i] + components[comp].sigma[i] * rng.gaussian();
        point[i] = std::clamp(v, 0.0, 1.0);
    }
    return point;
}

std::vector<std::vector<double>> load_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw LoadError("cannot open data file '" + path + "'", 0);
    std::vector<std::vector<double>> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw LoadError("invalid numeric field '" + field + "'", line_no);
            }
        }
        if (row.empty())
            throw LoadError("empty data row", line_no);
        if (!points.empty() && row.size() != points.front().size())
            throw LoadError("inconsistent column count", line_no);
        points.push_back(std::move(row));
    }
    return points;
}

void save_points_csv(const std::vector<std::vector<double>>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw LoadError("cannot write data file '" + path + "'", 0);
    char buf[64];
    for (const auto& row : points) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

// --- function targets --------------------------------------------------------

void FunctionTask::validate() const {
    if (n < 2)
        throw ConfigError("function task needs n >= 2 grid points");
    if (kind == FunctionKind::Sine && d != 1)
        throw ConfigError("sine task is 1-D");
    if (d == 0)
        throw ConfigError("function task needs d >= 1");
}

std::vector<int> FunctionTask::sample_point(RandomStream& rng) const {
    std::vector<int> x(d);
    for (auto& v : x)
        v = static_cast<int>(rng.index(n));
    return x;
}

double func_eval(const FunctionTask& task, const std::vector<int>& x) {
    if (x.size() != task.d)
        throw InputError("function input has wrong dimension");
    for (int v : x)
        if (v < 0 || v >= static_cast<int>(task.n))
            throw InputError("function input outside the [0, n-1] grid");
    switch (task.kind) {
    case FunctionKind::Sine:
        return task.scale *
               std::sin(2.0 * 3.14159265358979323846 * static_cast<double>(x[0]) /
                        static_cast<double>(task.n));
    case FunctionKind::Rms: {
        double sum = 0.0;
        const double denom = static_cast<double>(task.n - 1);
        for (int v : x) {
            const double t = static_cast<double>(v) / denom;
            sum += t * t;
        }
        return task.scale * std::sqrt(sum / static_cast<double>(task.d));
    }
    }
    return 0.0;
}

} // namespace lcs
