#pragma once

#include <string>
#include <utility>

#include "mdlab/field.hpp"
#include "mdlab/format.hpp"
#include "mdlab/radial.hpp"
#include "mdlab/scf.hpp"

namespace mdlab::io {

// Snapshot layout: metadata grid_n, grid_h, grid_origin, E, m, e, then one
// row per point x-fastest with columns
// x,y,z,re_U0,im_U0,re_U1,im_U1,re_V0,im_V0,re_V1,im_V1,A0,A1,A2,A3.
CsvTable snapshot_csv(const field::SpinorComponents& psi, const field::PotentialField& A,
                      const std::string& manifest_hash = {});
std::pair<field::SpinorComponents, field::PotentialField> read_snapshot(const CsvTable& t);

// [{equation, max_norm, l2_norm, grid_h}, ...]
json residual_json(const field::ResidualReport& r);

// Columns r,G,F,A0,h; metadata E, kappa, m, e, q_interior, q_psi.
CsvTable radial_state_csv(const radial::RadialState& s, const std::string& manifest_hash = {});
radial::RadialState read_radial_state(const CsvTable& t);

json shooting_json(const radial::ShootingResult& r);

// iteration,E,dA_inf,dh_l2
CsvTable scf_trace_csv(const scf::ScfTrace& t, const std::string& manifest_hash = {});

// One row per cell: index,e,q_psi,q_interior,converged,E,E_over_m,q0,
// iterations,node_count,message.
CsvTable sweep_csv(const std::vector<scf::SweepRow>& rows, double m, const std::string& manifest_hash = {});

// Figure data r,value,model_value.
CsvTable figure_csv(const std::vector<double>& r, const std::vector<double>& value,
                    const std::vector<double>& model, const std::string& manifest_hash = {});

}  // namespace mdlab::io
