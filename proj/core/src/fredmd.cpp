#include "atrisk/fredmd.hpp"

#include "atrisk/errors.hpp"

namespace atrisk {

const char* sector_name(Sector s) {
  switch (s) {
    case Sector::OutputIncome: return "Output & Income";
    case Sector::LaborMarket: return "Labor Market";
    case Sector::Housing: return "Housing";
    case Sector::ConsumptionOrders: return "Consumption & Orders";
    case Sector::MoneyCredit: return "Money & Credit";
    case Sector::InterestRatesSpreads: return "Interest Rates & Spreads";
    case Sector::Prices: return "Prices";
    case Sector::StockMarket: return "Stock Market";
  }
  return "?";
}

Sector sector_from_group(int group) {
  if (group < 1 || group > kSectorCount) {
    throw ArgumentError("variable group must lie in 1..8, got " + std::to_string(group));
  }
  return static_cast<Sector>(group - 1);
}

}  // namespace atrisk

namespace atrisk::fredmd {

const std::map<std::string, Sector>& default_sector_map() {
  static const std::map<std::string, Sector> map = {
      // Group 1: output and income
      {"RPI", Sector::OutputIncome},
      {"W875RX1", Sector::OutputIncome},
      {"INDPRO", Sector::OutputIncome},
      {"IPFPNSS", Sector::OutputIncome},
      {"IPFINAL", Sector::OutputIncome},
      {"IPCONGD", Sector::OutputIncome},
      {"IPDCONGD", Sector::OutputIncome},
      {"IPNCONGD", Sector::OutputIncome},
      {"IPBUSEQ", Sector::OutputIncome},
      {"IPMAT", Sector::OutputIncome},
      {"IPDMAT", Sector::OutputIncome},
      {"IPNMAT", Sector::OutputIncome},
      {"IPMANSICS", Sector::OutputIncome},
      {"IPB51222S", Sector::OutputIncome},
      {"IPFUELS", Sector::OutputIncome},
      {"CUMFNS", Sector::OutputIncome},
      {"NAPMPI", Sector::OutputIncome},
      // Group 2: labor market
      {"HWI", Sector::LaborMarket},
      {"HWIURATIO", Sector::LaborMarket},
      {"CLF16OV", Sector::LaborMarket},
      {"CE16OV", Sector::LaborMarket},
      {"UNRATE", Sector::LaborMarket},
      {"UEMPMEAN", Sector::LaborMarket},
      {"UEMPLT5", Sector::LaborMarket},
      {"UEMP5TO14", Sector::LaborMarket},
      {"UEMP15OV", Sector::LaborMarket},
      {"UEMP15T26", Sector::LaborMarket},
      {"UEMP27OV", Sector::LaborMarket},
      {"CLAIMSx", Sector::LaborMarket},
      {"PAYEMS", Sector::LaborMarket},
      {"USGOOD", Sector::LaborMarket},
      {"CES1021000001", Sector::LaborMarket},
      {"USCONS", Sector::LaborMarket},
      {"MANEMP", Sector::LaborMarket},
      {"DMANEMP", Sector::LaborMarket},
      {"NDMANEMP", Sector::LaborMarket},
      {"SRVPRD", Sector::LaborMarket},
      {"USTPU", Sector::LaborMarket},
      {"USWTRADE", Sector::LaborMarket},
      {"USTRADE", Sector::LaborMarket},
      {"USFIRE", Sector::LaborMarket},
      {"USGOVT", Sector::LaborMarket},
      {"CES0600000007", Sector::LaborMarket},
      {"AWOTMAN", Sector::LaborMarket},
      {"AWHMAN", Sector::LaborMarket},
      {"NAPMEI", Sector::LaborMarket},
      {"CES0600000008", Sector::LaborMarket},
      {"CES2000000008", Sector::LaborMarket},
      {"CES3000000008", Sector::LaborMarket},
      // Group 3: housing
      {"HOUST", Sector::Housing},
      {"HOUSTNE", Sector::Housing},
      {"HOUSTMW", Sector::Housing},
      {"HOUSTS", Sector::Housing},
      {"HOUSTW", Sector::Housing},
      {"PERMIT", Sector::Housing},
      {"PERMITNE", Sector::Housing},
      {"PERMITMW", Sector::Housing},
      {"PERMITS", Sector::Housing},
      {"PERMITW", Sector::Housing},
      // Group 4: consumption, orders and inventories
      {"DPCERA3M086SBEA", Sector::ConsumptionOrders},
      {"CMRMTSPLx", Sector::ConsumptionOrders},
      {"RETAILx", Sector::ConsumptionOrders},
      {"NAPM", Sector::ConsumptionOrders},
      {"NAPMNOI", Sector::ConsumptionOrders},
      {"NAPMSDI", Sector::ConsumptionOrders},
      {"NAPMII", Sector::ConsumptionOrders},
      {"ACOGNO", Sector::ConsumptionOrders},
      {"AMDMNOx", Sector::ConsumptionOrders},
      {"ANDENOx", Sector::ConsumptionOrders},
      {"AMDMUOx", Sector::ConsumptionOrders},
      {"BUSINVx", Sector::ConsumptionOrders},
      {"ISRATIOx", Sector::ConsumptionOrders},
      {"UMCSENTx", Sector::ConsumptionOrders},
      // Group 5: money and credit
      {"M1SL", Sector::MoneyCredit},
      {"M2SL", Sector::MoneyCredit},
      {"M2REAL", Sector::MoneyCredit},
      {"AMBSL", Sector::MoneyCredit},
      {"BOGMBASE", Sector::MoneyCredit},
      {"TOTRESNS", Sector::MoneyCredit},
      {"NONBORRES", Sector::MoneyCredit},
      {"BUSLOANS", Sector::MoneyCredit},
      {"REALLN", Sector::MoneyCredit},
      {"NONREVSL", Sector::MoneyCredit},
      {"CONSPI", Sector::MoneyCredit},
      {"MZMSL", Sector::MoneyCredit},
      {"DTCOLNVHFNM", Sector::MoneyCredit},
      {"DTCTHFNM", Sector::MoneyCredit},
      {"INVEST", Sector::MoneyCredit},
      // Group 6: interest rates and spreads
      {"FEDFUNDS", Sector::InterestRatesSpreads},
      {"CP3Mx", Sector::InterestRatesSpreads},
      {"TB3MS", Sector::InterestRatesSpreads},
      {"TB6MS", Sector::InterestRatesSpreads},
      {"GS1", Sector::InterestRatesSpreads},
      {"GS5", Sector::InterestRatesSpreads},
      {"GS10", Sector::InterestRatesSpreads},
      {"AAA", Sector::InterestRatesSpreads},
      {"BAA", Sector::InterestRatesSpreads},
      {"COMPAPFFx", Sector::InterestRatesSpreads},
      {"TB3SMFFM", Sector::InterestRatesSpreads},
      {"TB6SMFFM", Sector::InterestRatesSpreads},
      {"T1YFFM", Sector::InterestRatesSpreads},
      {"T5YFFM", Sector::InterestRatesSpreads},
      {"T10YFFM", Sector::InterestRatesSpreads},
      {"AAAFFM", Sector::InterestRatesSpreads},
      {"BAAFFM", Sector::InterestRatesSpreads},
      {"TWEXAFEGSMTHx", Sector::InterestRatesSpreads},
      {"TWEXMMTH", Sector::InterestRatesSpreads},
      {"EXSZUSx", Sector::InterestRatesSpreads},
      {"EXJPUSx", Sector::InterestRatesSpreads},
      {"EXUSUKx", Sector::InterestRatesSpreads},
      {"EXCAUSx", Sector::InterestRatesSpreads},
      // Group 7: prices
      {"WPSFD49207", Sector::Prices},
      {"WPSFD49502", Sector::Prices},
      {"WPSID61", Sector::Prices},
      {"WPSID62", Sector::Prices},
      {"OILPRICEx", Sector::Prices},
      {"PPICMM", Sector::Prices},
      {"NAPMPRI", Sector::Prices},
      {"CPIAUCSL", Sector::Prices},
      {"CPIAPPSL", Sector::Prices},
      {"CPITRNSL", Sector::Prices},
      {"CPIMEDSL", Sector::Prices},
      {"CUSR0000SAC", Sector::Prices},
      {"CUSR0000SAD", Sector::Prices},
      {"CUUR0000SAD", Sector::Prices},
      {"CUSR0000SAS", Sector::Prices},
      {"CPIULFSL", Sector::Prices},
      {"CUSR0000SA0L2", Sector::Prices},
      {"CUUR0000SA0L2", Sector::Prices},
      {"CUSR0000SA0L5", Sector::Prices},
      {"CUUR0000SA0L5", Sector::Prices},
      {"PCEPI", Sector::Prices},
      {"DDURRG3M086SBEA", Sector::Prices},
      {"DNDGRG3M086SBEA", Sector::Prices},
      {"DSERRG3M086SBEA", Sector::Prices},
      // Group 8: stock market
      {"S&P 500", Sector::StockMarket},
      {"S&P: indust", Sector::StockMarket},
      {"S&P div yield", Sector::StockMarket},
      {"S&P PE ratio", Sector::StockMarket},
      {"VIXCLSx", Sector::StockMarket},
  };
  return map;
}

const std::map<std::string, std::string>& default_aliases() {
  static const std::map<std::string, std::string> map = {
      {"10 yr-FF spread", "T10YFFM"},
      {"5 yr-FF spread", "T5YFFM"},
      {"1 yr-FF spread", "T1YFFM"},
      {"6 mo-FF spread", "TB6SMFFM"},
      {"3 mo-FF spread", "TB3SMFFM"},
      {"Aaa-FF spread", "AAAFFM"},
      {"Baa-FF spread", "BAAFFM"},
      {"CP-FF spread", "COMPAPFFx"},
      {"Emp: total", "PAYEMS"},
      {"Emp: mfg", "MANEMP"},
      {"U: all", "UNRATE"},
      {"U: mean duration", "UEMPMEAN"},
      {"U < 5 wks", "UEMPLT5"},
      {"U 5-14 wks", "UEMP5TO14"},
      {"U 15+ wks", "UEMP15OV"},
      {"U 15-26 wks", "UEMP15T26"},
      {"U 27+ wks", "UEMP27OV"},
      {"UI claims", "CLAIMSx"},
      {"M&T invent/sales", "ISRATIOx"},
      {"CBOE volatility index", "VIXCLSx"},
      {"Avg hrs: mfg", "AWHMAN"},
      {"Starts: nonfarm", "HOUST"},
      {"IP: total", "INDPRO"},
      {"Retail sales", "RETAILx"},
      {"M2 (real)", "M2REAL"},
      {"Real personal income", "RPI"},
  };
  return map;
}

const std::map<std::string, std::vector<std::string>>& builtin_subsets() {
  static const std::map<std::string, std::vector<std::string>> map = {
      {"univariate_spread", {"T10YFFM"}},
      {"parsimonious10",
       {"T10YFFM", "BAAFFM", "PAYEMS", "CLAIMSx", "UNRATE", "INDPRO", "HOUST", "RETAILx",
        "S&P 500", "M2REAL"}},
      {"spreads8",
       {"T10YFFM", "T5YFFM", "T1YFFM", "TB6SMFFM", "TB3SMFFM", "AAAFFM", "BAAFFM", "COMPAPFFx"}},
      {"real8",
       {"PAYEMS", "CLAIMSx", "AWHMAN", "UNRATE", "INDPRO", "RPI", "HOUST", "RETAILx"}},
  };
  return map;
}

}  // namespace atrisk::fredmd
