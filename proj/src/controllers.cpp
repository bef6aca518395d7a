#include "hedac/controllers.hpp"

#include <optional>

namespace hedac {

std::string_view controller_name(const ControllerKind& kind) {
  switch (kind.index()) {
    case 0: return "hedac";
    case 1: return "lawnmower";
    case 2: return "smc";
    default: return "rhc";
  }
}

namespace {

class HedacController final : public Controller {
 public:
  explicit HedacController(const HedacParams& params) : params_(params) { params_.validate(); }

  std::vector<Heading> directions(const ControlContext& ctx) override {
    HedacResult r = hedac_directions(ctx.agents, ctx.occurrence, params_, previous_ ? &*previous_ : nullptr);
    previous_ = std::move(r.u);
    return std::move(r.directions);
  }

 private:
  HedacParams params_;
  std::optional<PotentialField> previous_;
};

class LawnmowerController final : public Controller {
 public:
  LawnmowerController(const ScalarField& prior, std::span<const AgentState> fleet, const LawnmowerParams& params)
      : plan_(prior, fleet, params) {}

  std::vector<Heading> directions(const ControlContext& ctx) override {
    return lawnmower_directions(ctx.agents, plan_, tracks_, ctx.dt);
  }

 private:
  LawnmowerPlan plan_;
  std::vector<LawnmowerTrack> tracks_;
};

class SmcController final : public Controller {
 public:
  SmcController(const ScalarField& prior, const SmcParams& params) : model_(prior, params) {}

  std::vector<Heading> directions(const ControlContext& ctx) override {
    return smc_directions(ctx.agents, ctx.occurrence, ctx.coverage, model_);
  }

 private:
  SmcModel model_;
};

class RhcController final : public Controller {
 public:
  RhcController(const GridSpec& grid, const RhcParams& params, std::uint64_t run_seed)
      : planner_(grid, params, run_seed) {}

  std::vector<Heading> directions(const ControlContext& ctx) override {
    return rhc_directions(ctx.agents, ctx.occurrence, planner_, ctx.dt, ctx.step);
  }

 private:
  RhcPlanner planner_;
};

}  // namespace

std::unique_ptr<Controller> make_controller(const ControllerKind& kind, const ScalarField& prior,
                                            std::span<const AgentState> fleet, std::uint64_t run_seed) {
  return std::visit(
      [&](const auto& params) -> std::unique_ptr<Controller> {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, HedacParams>) {
          return std::make_unique<HedacController>(params);
        } else if constexpr (std::is_same_v<T, LawnmowerParams>) {
          return std::make_unique<LawnmowerController>(prior, fleet, params);
        } else if constexpr (std::is_same_v<T, SmcParams>) {
          return std::make_unique<SmcController>(prior, params);
        } else {
          return std::make_unique<RhcController>(prior.spec(), params, run_seed);
        }
      },
      kind);
}

}  // namespace hedac
