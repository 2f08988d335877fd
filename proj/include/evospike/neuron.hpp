#pragma once

namespace evospike {

enum class ModelKind { ca, network };

// Decoded physical parameters shared by every neuron in a model.
struct ModelParams {
    double leak_c = 0.0;       // per-step leak fraction
    double integ_c = 0.0;      // per-input gain
    int refractory_steps = 0;  // post-spike lockout, in simulation steps
    double threshold = 1.0;    // firing threshold, voltage units (> 0)
    double spont_prob = 0.0;   // spontaneous firing probability per step
    double inhib_ratio = 0.0;  // fraction of inhibitory neurons
    double density = 1.0;      // CA: integer radius 1..6; network: c_D in [0.1, 4.1]
    ModelKind kind = ModelKind::ca;
};

struct NeuronState {
    double potential = 0.0;       // rest = 0; may go negative under inhibition
    int refractory_remaining = 0;
    bool fired = false;
    bool is_inhibitory = false;
};

// Membrane update, forward Euler with unit time step:
//   V <- V + (-leak_c * V + integ_c * weighted_input)
// weighted_input is sum over presynaptic fired outputs, +1 per excitatory
// spike and -1 per inhibitory spike. While refractory the potential is held
// at 0 and inputs are dropped; firing is decided later by threshold_fire.
inline NeuronState membrane_step(NeuronState state, const ModelParams& params,
                                 double weighted_input) {
    if (state.refractory_remaining > 0) {
        state.potential = 0.0;
        state.fired = false;
        return state;
    }
    state.potential += -params.leak_c * state.potential + params.integ_c * weighted_input;
    state.fired = false;
    return state;
}

// Firing decision for the step; call after membrane_step with one uniform
// draw from the owning individual's stream. A neuron that spiked at step t
// is locked out for steps t+1 .. t+refractory_steps, so the lockout counter
// counts down here, in the gate that observes it.
inline NeuronState threshold_fire(NeuronState state, const ModelParams& params,
                                  double uniform_draw) {
    if (state.refractory_remaining > 0) {
        --state.refractory_remaining;
        state.fired = false;
        return state;
    }
    if (state.potential >= params.threshold || uniform_draw < params.spont_prob) {
        state.fired = true;
        state.potential = 0.0;  // reset exactly to rest
        state.refractory_remaining = params.refractory_steps;
    } else {
        state.fired = false;
    }
    return state;
}

}  // namespace evospike
