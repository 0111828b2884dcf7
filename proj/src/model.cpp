#include "subrad/model.hpp"

#include <set>

#include "subrad/fields.hpp"

namespace subrad {

// ---- SystemModel ------------------------------------------------------------

SystemModel SystemModel::build(std::vector<ModeDescriptor> modes,
                               std::array<EmitterDescriptor, 2> emitters) {
    for (const auto& m : modes) m.validate();
    for (const auto& e : emitters) e.validate();
    std::set<std::string> ids;
    for (const auto& m : modes)
        if (!ids.insert(m.id).second)
            throw ConfigError("duplicate mode id '" + m.id + "'");

    SystemModel sys;
    sys.modes_ = std::move(modes);
    sys.emitters_ = std::move(emitters);

    Matrix g(sys.modes_.size(), 2);
    for (int xi = 0; xi < static_cast<int>(sys.modes_.size()); ++xi)
        for (int j = 0; j < 2; ++j)
            g(xi, j) = fields::coupling_at(sys.modes_[xi], sys.emitters_[j], j);
    sys.coupling_ = CouplingMatrix(std::move(g));
    return sys;
}

int SystemModel::emitter_index(int j) {
    if (j != 1 && j != 2) throw InvalidState("emitter index must be 1 or 2");
    return j;
}

int SystemModel::mode_index(int xi) const {
    if (xi < 0 || xi >= mode_count()) throw InvalidState("mode index out of range");
    return 3 + xi;
}

std::string SystemModel::basis_label(int index) const {
    if (index == 0) return "gg0";
    if (index == 1) return "eg0";
    if (index == 2) return "ge0";
    if (index >= 3 && index < dim()) return "gg1:" + modes_[index - 3].id;
    throw InvalidState("basis index out of range");
}

int SystemModel::basis_index(const std::string& label) const {
    if (label == "gg0") return 0;
    if (label == "eg0") return 1;
    if (label == "ge0") return 2;
    if (label.rfind("gg1:", 0) == 0) {
        const std::string id = label.substr(4);
        for (int xi = 0; xi < mode_count(); ++xi)
            if (modes_[xi].id == id) return 3 + xi;
    }
    throw InvalidState("unknown basis label '" + label + "'");
}

const ModeDescriptor& SystemModel::mode(int xi) const {
    if (xi < 0 || xi >= mode_count()) throw InvalidState("mode index out of range");
    return modes_[xi];
}

const EmitterDescriptor& SystemModel::emitter(int j) const {
    return emitters_[static_cast<size_t>(emitter_index(j) - 1)];
}

double SystemModel::reference_frequency() const {
    return 0.5 * (emitters_[0].omega + emitters_[1].omega);
}

// ---- operators --------------------------------------------------------------

Matrix build_hamiltonian(const SystemModel& model, Frame frame) {
    const int d = model.dim();
    const int n = model.mode_count();
    Matrix h = Matrix::Zero(d, d);

    h(1, 1) = model.emitter(1).omega;
    h(2, 2) = model.emitter(2).omega;
    for (int xi = 0; xi < n; ++xi) h(3 + xi, 3 + xi) = model.mode(xi).omega;

    // a_xi^dag sigma_j^- + h.c. on the one-excitation sector:
    // <gg,1_xi| H |e_j g,0> = g_{xi j}
    for (int xi = 0; xi < n; ++xi) {
        for (int j = 0; j < 2; ++j) {
            const complex g = model.coupling().entry(xi, j);
            h(3 + xi, 1 + j) = g;
            h(1 + j, 3 + xi) = std::conj(g);
        }
    }

    if (frame == Frame::RotatingAtEmitter) {
        const double wr = model.reference_frequency();
        for (int i = 1; i < d; ++i) h(i, i) -= wr;  // N_exc = 1 on every excited basis state
    }
    return h;
}

std::vector<Dissipator> build_dissipators(const SystemModel& model) {
    const int d = model.dim();
    std::vector<Dissipator> out;
    out.reserve(model.mode_count());
    for (int xi = 0; xi < model.mode_count(); ++xi) {
        Dissipator dis;
        dis.jump = Matrix::Zero(d, d);
        dis.jump(0, 3 + xi) = 1.0;  // a_xi: |gg,1_xi> -> |gg,0>
        dis.rate = model.mode(xi).kappa;
        dis.mode_id = model.mode(xi).id;
        out.push_back(std::move(dis));
    }
    return out;
}

Matrix number_operator(const SystemModel& model) {
    const int d = model.dim();
    Matrix n = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) n(i, i) = 1.0;
    return n;
}

Matrix one_excitation_effective_hamiltonian(const SystemModel& model, Frame frame) {
    const Matrix h = build_hamiltonian(model, frame);
    const int n1 = model.dim() - 1;
    Matrix heff = h.block(1, 1, n1, n1);
    for (int xi = 0; xi < model.mode_count(); ++xi)
        heff(2 + xi, 2 + xi) -= complex(0, 0.5) * model.mode(xi).kappa;
    return heff;
}

}  // namespace subrad
