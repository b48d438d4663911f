# Cultural market simulator - genome-backed valuation, markets and analysis
