#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lcs/core.hpp"
#include "lcs/errors.hpp"
#include "lcs/rng.hpp"

namespace lcs {

// --- Boolean multiplexer -----------------------------------------------

// k address bits (most significant first) select one of 2^k data bits.
struct MultiplexerTask {
    std::size_t k = 2;

    std::size_t input_length() const { return k + (std::size_t{1} << k); }
    BitInput sample(RandomStream& rng) const;
};

// Value of the addressed data bit. Throws ConfigError on wrong input length.
bool mux_eval(const MultiplexerTask& task, const BitInput& bits);

// --- Woods-style gridworld ----------------------------------------------

enum class Cell : std::uint8_t { Empty, Obstacle, Food };

// Bounded rectangular maze. The agent senses its eight neighbors and moves
// in compass directions 0..7, clockwise from north. Off-grid reads as
// obstacle. Reaching food ends the episode.
class MazeWorld {
public:
    // Map characters: '.' empty, 'T' obstacle, 'F' food, '*' empty fixed start.
    static MazeWorld from_text(const std::string& text);
    static MazeWorld from_file(const std::string& path);

    void reset(RandomStream& rng); // agent to fixed start if present, else random empty cell
    void place_agent(int row, int col);

    BitInput sense() const; // 16 bits: 8 cells x 2 bits, empty=00 obstacle=10 food=11

    struct StepResult {
        double reward = 0.0;
        bool done = false;
    };
    // Move into the addressed neighbor if empty (move) or food (reward, done).
    // Blocked moves leave the position unchanged. Throws InputError unless
    // action is in 0..7.
    StepResult step(int action);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Cell at(int row, int col) const; // off-grid reads as Obstacle
    int agent_row() const { return agent_row_; }
    int agent_col() const { return agent_col_; }
    double food_reward() const { return food_reward_; }
    void set_food_reward(double r) { food_reward_ = r; }

    std::vector<std::pair<int, int>> empty_cells() const;

    // Mean 8-connected shortest path from every empty cell to the nearest
    // food (entering the food cell counts as the final step).
    double optimal_mean_steps() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cell> grid_;
    int agent_row_ = -1;
    int agent_col_ = -1;
    int start_row_ = -1; // -1: random start
    int start_col_ = -1;
    double food_reward_ = 1000.0;
};

// Neighbor offsets in action order: N, NE, E, SE, S, SW, W, NW.
extern const int kMazeDir[8][2];

// --- Gaussian mixture sampler ---------------------------------------------

struct ClusterComponent {
    std::vector<double> mean;  // in [0,1]^d
    std::vector<double> sigma; // per-axis standard deviation
};

struct ClusterGenerator {
    std::size_t d = 2;
    std::vector<ClusterComponent> components;
    std::vector<double> weights; // must sum to 1

    void validate() const;
    // Component by mixing weight, gaussian per axis, clamped to [0,1]^d.
    std::vector<double> sample(RandomStream& rng) const;
    std::size_t sample_component(RandomStream& rng) const;
};

// Headerless numeric CSV, one point per row, values in [0,1].
std::vector<std::vector<double>> load_points_csv(const std::string& path);
void save_points_csv(const std::vector<std::vector<double>>& points, const std::string& path);

// --- scalar function targets ---------------------------------------------

enum class FunctionKind { Sine, Rms };

// Targets on the integer grid [0, n-1]^d. Sine is 1-D: y = sin(2*pi*x/n).
// Rms: y = sqrt(sum((x_i/(n-1))^2) / d). Both scaled by `scale`.
struct FunctionTask {
    FunctionKind kind = FunctionKind::Sine;
    std::size_t d = 1;
    std::size_t n = 1000; // grid points per dimension, domain [0, n-1]
    double scale = 1.0;

    void validate() const;
    std::vector<int> sample_point(RandomStream& rng) const;
};

// Throws InputError when x is outside [0, n-1]^d or has the wrong dimension.
double func_eval(const FunctionTask& task, const std::vector<int>& x);

} // namespace lcs
