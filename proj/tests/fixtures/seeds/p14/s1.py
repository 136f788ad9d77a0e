a = int(input())
b = int(input())
c = a ** 2 + b ** 2
d = c / 2
print(c, d, a - b)
