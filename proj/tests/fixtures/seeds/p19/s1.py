balance = 100
rate = 0.05
years = 0
while balance < 150:
    balance = balance * (1 + rate)
    years += 1
print(years, round(balance, 2))
