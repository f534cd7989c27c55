#pragma once

// mpmath, 50 digits; regenerate with make_frozen.py
namespace frozen {

inline constexpr double log_gamma_0p001 = 6.907178885383853682512345;
inline constexpr double log_gamma_0p1 = 2.252712651734205959869702;
inline constexpr double log_gamma_0p5 = 0.5723649429247000870717137;
inline constexpr double log_gamma_0p85 = 0.1065951164781176377122691;
inline constexpr double log_gamma_1p15 = -0.06930620867104688224241731;
inline constexpr double log_gamma_2p5 = 0.2846828704729191596324947;
inline constexpr double log_gamma_10 = 12.80182748008146961120772;
inline constexpr double log_gamma_49p9 = 144.1756460537503385247081;
inline constexpr double Lambda_3_0p75 = 0.4464295999625653430074669;
inline constexpr double Lambda_4_0p6 = 1.098221995771828241032044;
inline constexpr double Lambda_3_0p9999 = 0.2500767170876171266645017;
inline constexpr double Lambda_7_0p55 = 2.792123646295714317488265;
inline constexpr double lambda_alpha_0p3_3_0p75 = 0.3778946161785931995654777;
inline constexpr double a_3_0p5 = 0.05066059182116888572193973;
inline constexpr double a_3_0p75 = 0.05952528368835090917415310;
inline constexpr double a_4_0p6 = 0.04500769006378333814800300;
inline constexpr double a_3_1m1e6 = 0.0000004774636297726621424462593;
inline constexpr double alpha_half_Lambda = 0.5369183964643492487897632;
inline constexpr double mu_half_Lambda = 0.2130816035356507512102368;
inline constexpr double mubar_half_Lambda = 1.286918396464349248789763;
inline constexpr double p_plus_half_Lambda = 1.412173425549195304197254;
inline constexpr double p_minus_half_Lambda = 1.218634823513167928508096;
inline constexpr double p_mid_window = 1.315404124531181616352675;
inline constexpr double theta0_mid_window = 0.5852677917360867863407832;
inline constexpr double A_mid_window = 0.05919791139330074456190379;
inline constexpr double J_3_0p75_tau0p3 = 50.07692876200954423380644;
inline constexpr double J_3_0p75_tau2 = 0.1465375274879786359072988;
inline constexpr double J_4_0p6_tau0p05 = 2690.463308763241095104339;

} // namespace frozen
